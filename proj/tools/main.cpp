// cantor-forge: bounded verification toolkit for the rho_I topologies on
// clopen subsets of 2^N x N.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "cforge/constructions.hpp"
#include "cforge/enumeration.hpp"
#include "cforge/finite_space.hpp"
#include "cforge/harness.hpp"

namespace fs = std::filesystem;
using namespace cforge;

namespace {

constexpr int kExitError = 3;

std::string display(const ClopenX& phi) {
  if (phi.empty()) return "∅";
  std::string out;
  for (const auto& c : phi.cylinders()) {
    if (!out.empty()) out += " ∪ ";
    out += "[" + (c.word.empty() ? std::string("ε") : c.word) + "]x{" +
           std::to_string(c.level) + "}";
  }
  return out;
}

// Target specs: all | none | evens | odds | finite:1,2,3 | column:K | row:K |
// sparse:A:D | d:SPEC (the D(A)-set of an inner target).
RepSet parse_set(const std::string& spec) {
  auto split = [](const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, sep)) out.push_back(part);
    return out;
  };
  if (spec == "all") return RepSet::naturals();
  if (spec == "none") return RepSet::finite({});
  if (spec == "evens") return RepSet::periodic("", "10");
  if (spec == "odds") return RepSet::periodic("", "01");
  auto parts = split(spec, ':');
  if (parts.size() == 2 && parts[0] == "finite") {
    std::set<uint64_t> elems;
    for (const auto& e : split(parts[1], ','))
      if (!e.empty()) elems.insert(std::stoull(e));
    return RepSet::finite(std::move(elems));
  }
  if (parts.size() == 2 && parts[0] == "column")
    return RepSet::fiber(RepSet::Axis::First, std::stoull(parts[1]));
  if (parts.size() == 2 && parts[0] == "row")
    return RepSet::fiber(RepSet::Axis::Second, std::stoull(parts[1]));
  if (parts.size() == 3 && parts[0] == "sparse")
    return RepSet::sparse(std::stoull(parts[1]), std::stoull(parts[2]));
  throw CLI::ValidationError("target", "unrecognized set spec: " + spec);
}

void write_json(const std::optional<std::string>& path, const Json& j) {
  if (path) {
    std::ofstream f(*path);
    if (!f) throw CforgeError("cannot open output file: " + *path);
    f << j.dump(2) << "\n";
  } else {
    std::cout << j.dump(2) << "\n";
  }
}

int emit(const Certificate& cert, const std::optional<std::string>& out) {
  write_json(out, cert.to_json());
  return cert.exit_code();
}

IndexSet parse_target(const std::string& spec) {
  if (spec.rfind("d:", 0) == 0) {
    RepSet a = parse_set(spec.substr(2));
    IndexSet s;
    s.desc = "D(" + spec.substr(2) + ")";
    s.pred = [a](uint64_t n) {
      return D_membership(a, enumeration::unrank(n)) ? TriState::Yes
                                                     : TriState::No;
    };
    return s;
  }
  return IndexSet::of(parse_set(spec), spec);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cantor-forge: certificates for clopen-algebra topology lemmas"};
  app.require_subcommand(1);

  std::string ideal = "fin";
  uint64_t seed = 42;
  Bounds bounds;
  std::optional<std::string> out;
  std::optional<std::string> config_path;
  app.add_option("--config", config_path, "JSON config file")->expected(1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--ideal", ideal, "ideal name");
    sub->add_option("--seed", seed, "probe family seed");
    sub->add_option("--out", out, "output file (default stdout)");
    sub->add_option("--index-bound", bounds.index_bound, "index scan bound");
    sub->add_option("--probes", bounds.probe_count, "probe count");
  };

  // --- enumerate ---
  auto* cmd_enum = app.add_subcommand("enumerate", "print phi_n for a range");
  uint64_t en_from = 0, en_to = 10;
  cmd_enum->add_option("--from", en_from, "first index");
  cmd_enum->add_option("--to", en_to, "last index (inclusive)");

  // --- probe ---
  auto* cmd_probe = app.add_subcommand("probe", "bounded density / nwd runs");
  std::string probe_mode, target_spec = "all", copy_name = "phi";
  cmd_probe->add_option("mode", probe_mode, "density | nwd")->required();
  cmd_probe->add_option("--target", target_spec, "index-set spec");
  cmd_probe->add_option("--copy", copy_name, "phi | psi");
  add_common(cmd_probe);

  // --- construct ---
  auto* cmd_con = app.add_subcommand("construct", "run one construction");
  cmd_con->require_subcommand(1);

  auto* con_am = cmd_con->add_subcommand("am", "block membership phi in A_m");
  std::string phi_json;
  uint64_t am_m = 0;
  con_am->add_option("--phi", phi_json, "clopen set as JSON")->required();
  con_am->add_option("--m", am_m, "block index");

  auto* con_dw = cmd_con->add_subcommand("dense-witness",
                                         "density witnesses over probes");
  std::string dw_e = "evens";
  con_dw->add_option("--levels", dw_e, "level set spec");
  add_common(con_dw);

  auto* con_diag = cmd_con->add_subcommand("diagonal", "selector avoidance");
  uint64_t diag_depth = 300, diag_instances = 10;
  con_diag->add_option("--depth", diag_depth, "recursion depth");
  con_diag->add_option("--instances", diag_instances, "instance count");
  add_common(con_diag);

  auto* con_d = cmd_con->add_subcommand("d-set", "D(A) density / nwd status");
  std::string d_spec = "evens";
  con_d->add_option("--set", d_spec, "the set A");
  add_common(con_d);

  auto* con_cv = cmd_con->add_subcommand("converge", "entry bound into a "
                                         "negative neighborhood of the empty set");
  std::vector<std::string> cv_negs;
  con_cv->add_option("--negative", cv_negs,
                     "constraint SPEC@LEVEL, repeatable");
  add_common(con_cv);

  auto* con_cd = cmd_con->add_subcommand("closed-discrete",
                                         "F-hat closed discrete check");
  std::string cd_spec = "finite:1,2,3";
  uint64_t cd_m = 8, cd_n = 400;
  con_cd->add_option("--set", cd_spec, "the index set F");
  con_cd->add_option("--levels", cd_m, "level bound M");
  con_cd->add_option("--bound", cd_n, "index bound N");
  add_common(con_cd);

  auto* con_g = cmd_con->add_subcommand("gamma", "preimage decomposition");
  std::string g_ones = "finite:0";
  uint64_t g_p = 0, g_bound = 1000;
  con_g->add_option("--ones", g_ones, "support of alpha");
  con_g->add_option("--p", g_p, "level");
  con_g->add_option("--bound", g_bound, "equivalence scan bound");
  add_common(con_g);

  auto* con_y = cmd_con->add_subcommand("y-not-q", "q+ failure for Y");
  uint64_t y_kmax = 200;
  con_y->add_option("--k-max", y_kmax, "selector blocks");
  add_common(con_y);

  auto* con_xs = cmd_con->add_subcommand("xinoss", "finite-union bound B");
  add_common(con_xs);

  auto* con_yk = cmd_con->add_subcommand("yknoss", "star-level pipeline");
  add_common(con_yk);

  // --- finite ---
  auto* cmd_fin = app.add_subcommand("finite", "finite-space oracle");
  auto* fin_ta = cmd_fin->add_subcommand("tau-alpha",
                                         "refinement identities on n points");
  int fin_points = 3;
  bool fin_check = false;
  fin_ta->add_option("--points", fin_points, "1..4");
  fin_ta->add_flag("--check", fin_check, "verify identities on every space");
  fin_ta->add_option("--out", out, "output file (default stdout)");

  // --- verify-lemma ---
  auto* cmd_vl = app.add_subcommand("verify-lemma", "run one lemma or all");
  std::string vl_id;
  std::optional<std::string> vl_dir;
  unsigned vl_threads = 0;
  cmd_vl->add_option("id", vl_id, "lemma id or 'all'")->required();
  cmd_vl->add_option("--ideal", ideal, "ideal name");
  cmd_vl->add_option("--seed", seed, "probe family seed");
  cmd_vl->add_option("--out", vl_dir, "certificate output directory");
  cmd_vl->add_option("--threads", vl_threads, "0 = CANTOR_FORGE_THREADS");

  // --- report ---
  auto* cmd_rep = app.add_subcommand("report", "markdown summary of a run dir");
  std::string rep_dir;
  cmd_rep->add_option("--dir", rep_dir, "directory of lemma-run JSON files")
      ->required();
  cmd_rep->add_option("--out", out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (config_path) {
      std::ifstream f(*config_path);
      if (!f) throw CforgeError("cannot open config: " + *config_path);
      Json j = Json::parse(f);
      if (j.contains("ideal")) ideal = j["ideal"].get<std::string>();
      if (j.contains("seed")) seed = j["seed"].get<uint64_t>();
      if (j.contains("bounds")) bounds = Bounds::from_json(j["bounds"]);
    }
    LemmaConfig cfg{ideal, seed, bounds};

    if (cmd_enum->parsed()) {
      for (uint64_t n = en_from; n <= en_to; ++n)
        std::cout << n << ": " << display(enumeration::unrank(n)) << "\n";
      return 0;
    }

    if (cmd_probe->parsed()) {
      if (probe_mode != "density" && probe_mode != "nwd")
        throw CLI::ValidationError("mode", "expected density or nwd");
      ProbeTarget target;
      target.indices = parse_target(target_spec);
      target.copy = copy_name == "psi" ? ProbeTarget::Copy::Psi
                                       : ProbeTarget::Copy::Phi;
      IdealHandle h = builtin_ideal(ideal);
      ProbeFamily probes = make_probe_family(ideal, seed, bounds);
      Certificate cert = probe_mode == "density"
                             ? density_probe(target, h, probes)
                             : nwd_probe(target, h, probes);
      return emit(cert, out);
    }

    if (con_am->parsed()) {
      ClopenX phi = ClopenX::from_json(Json::parse(phi_json));
      bool in = in_A_m(phi, am_m);
      write_json(out, Json{{"phi", phi.to_json()}, {"m", am_m}, {"in", in}});
      return 0;
    }
    if (con_dw->parsed()) {
      ProbeFamily probes = make_probe_family(ideal, seed, bounds);
      RepSet e = parse_set(dw_e);
      Json items = Json::array();
      for (const auto& v : probes.probes) {
        auto [l, phi] = dense_witness_in_Am(v, e, bounds.eq_budget);
        items.push_back(Json{{"V", v.to_json()},
                             {"level", l},
                             {"phi", phi.to_json()},
                             {"member", member_basic(phi, v)},
                             {"in_block", in_A_m(phi, l + 1)}});
      }
      write_json(out, items);
      return 0;
    }
    if (con_diag->parsed()) {
      Bounds b = bounds;
      b.probe_count = diag_instances;
      LemmaConfig c{ideal, seed, b};
      return emit(run_lemma("xnoq.diagonal", c).outcome, out);
    }
    if (con_d->parsed()) {
      IdealHandle h = builtin_ideal(ideal);
      ProbeFamily probes = make_probe_family(ideal, seed, bounds);
      return emit(D_status(parse_set(d_spec), h, probes), out);
    }
    if (con_cv->parsed()) {
      BasicOpen v;
      v.ideal_tag = ideal;
      for (const auto& spec : cv_negs) {
        auto at = spec.rfind('@');
        std::string set_part = spec.substr(0, at);
        uint64_t level = at == std::string::npos
                             ? 0
                             : std::stoull(spec.substr(at + 1));
        v.add(false, PointB(parse_set(set_part)), level);
      }
      if (v.negatives.empty()) v.add(false, PointB(parse_set("all")), 0);
      ConvergeResult r = converging_sequence(v, bounds.eq_budget);
      write_json(out, Json{{"V", v.to_json()}, {"N", r.N}, {"n_star", r.n_star}});
      return 0;
    }
    if (con_cd->parsed()) {
      IdealHandle h = builtin_ideal(ideal);
      return emit(closed_discrete_check(h, parse_set(cd_spec), cd_m, cd_n),
                  out);
    }
    if (con_g->parsed()) {
      GammaResult r = gamma_preimage(PointB(parse_set(g_ones)), g_p, g_bound);
      Json j = r.cert.to_json();
      j["exceptional"] = r.A;
      write_json(out, j);
      return r.cert.exit_code();
    }
    if (con_y->parsed()) {
      IdealHandle h = builtin_ideal(ideal);
      if (!h.is_tall)
        throw CforgeError("y-not-q requires a tall ideal (try density-zero)");
      return emit(y_not_qplus(h, bounds, y_kmax).cert, out);
    }
    if (con_xs->parsed()) {
      LemmaConfig c{ideal, seed, bounds};
      return emit(run_lemma("xinoSS", c).outcome, out);
    }
    if (con_yk->parsed()) {
      LemmaConfig c{ideal, seed, bounds};
      return emit(run_lemma("yknoss", c).outcome, out);
    }

    if (fin_ta->parsed()) {
      auto spaces = enumerate_topologies(fin_points);
      Json j{{"points", fin_points},
             {"topologies", spaces.size()},
             {"preorders", count_preorders(fin_points)}};
      int refuted = 0;
      if (fin_check) {
        for (const auto& x : spaces)
          if (check_tau_alpha_identities(x).kind !=
              Certificate::Kind::Verified)
            ++refuted;
        j["refuted"] = refuted;
      }
      write_json(out, j);
      return refuted == 0 ? 0 : 1;
    }

    if (cmd_vl->parsed()) {
      std::vector<LemmaRun> runs;
      if (vl_id == "all") {
        runs = run_all(cfg, vl_threads);
      } else {
        runs.push_back(run_lemma(vl_id, cfg));
      }
      bool refuted = false;
      for (const auto& r : runs) {
        std::string name = r.id;
        for (auto& ch : name)
          if (ch == '.' || ch == '/') ch = '-';
        if (vl_dir) {
          fs::create_directories(*vl_dir);
          std::ofstream f(fs::path(*vl_dir) / (name + ".json"));
          f << r.to_json().dump(2) << "\n";
        }
        std::cout << r.id << ": "
                  << Certificate::kind_name(r.outcome.kind) << "\n";
        if (r.outcome.kind == Certificate::Kind::Refuted) refuted = true;
      }
      return refuted ? 1 : 0;
    }

    if (cmd_rep->parsed()) {
      std::vector<LemmaRun> runs;
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(rep_dir))
        if (entry.path().extension() == ".json") files.push_back(entry.path());
      std::sort(files.begin(), files.end());
      for (const auto& p : files) {
        std::ifstream f(p);
        runs.push_back(LemmaRun::from_json(Json::parse(f)));
      }
      std::string md = report_markdown(runs);
      if (out) {
        std::ofstream f(*out);
        f << md;
      } else {
        std::cout << md;
      }
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
