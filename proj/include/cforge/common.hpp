#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace cforge {

// Field order matters: certificates must be byte-identical across runs.
using Json = nlohmann::ordered_json;

enum class TriState { No = 0, Yes = 1, Unknown = 2 };

inline const char* to_string(TriState t) {
  switch (t) {
    case TriState::No: return "no";
    case TriState::Yes: return "yes";
    default: return "unknown";
  }
}

struct CforgeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Version strings embedded in certificate provenance.
inline constexpr const char* kArtifactVersion = "0.1.0";
inline constexpr const char* kPairingVersion = "cantor-v1";
inline constexpr const char* kEnumerationVersion = "lenlex-v1";
inline constexpr const char* kCertSchema = "cert/1";

}  // namespace cforge
