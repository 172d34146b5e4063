#include "cforge/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <future>
#include <random>
#include <sstream>
#include <thread>

#include "cforge/constructions.hpp"
#include "cforge/enumeration.hpp"
#include "cforge/finite_space.hpp"

namespace cforge {

Json LemmaConfig::to_json() const {
  return Json{{"ideal", ideal}, {"seed", seed}, {"bounds", bounds.to_json()}};
}

LemmaConfig LemmaConfig::from_json(const Json& j) {
  LemmaConfig c;
  if (j.contains("ideal")) c.ideal = j["ideal"].get<std::string>();
  if (j.contains("seed")) c.seed = j["seed"].get<uint64_t>();
  if (j.contains("bounds")) c.bounds = Bounds::from_json(j["bounds"]);
  return c;
}

Json LemmaRun::to_json() const {
  return Json{{"id", id},
              {"config", config.to_json()},
              {"certificate", outcome.to_json()}};
}

LemmaRun LemmaRun::from_json(const Json& j) {
  LemmaRun r;
  r.id = j.at("id").get<std::string>();
  r.config = LemmaConfig::from_json(j.at("config"));
  r.outcome = Certificate::from_json(j.at("certificate"));
  return r;
}

namespace {

uint64_t mix(uint64_t a, uint64_t b) {
  uint64_t x = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  return x;
}

Json subcert(const std::string& stage, const Certificate& c) {
  return Json{{"check", "subcert"}, {"stage", stage}, {"cert", c.to_json()}};
}

Certificate aggregate(const std::vector<std::pair<std::string, Certificate>>& parts,
                      Json provenance) {
  Certificate out;
  out.provenance = std::move(provenance);
  bool refuted = false, exhausted = false;
  for (const auto& [stage, c] : parts) {
    out.evidence.push_back(subcert(stage, c));
    if (c.kind == Certificate::Kind::Refuted) refuted = true;
    if (c.kind == Certificate::Kind::Exhausted) exhausted = true;
  }
  out.kind = refuted     ? Certificate::Kind::Refuted
             : exhausted ? Certificate::Kind::Exhausted
                         : Certificate::Kind::Verified;
  return out;
}

Certificate flag(bool ok, Json provenance, Json evidence) {
  Certificate c;
  c.kind = ok ? Certificate::Kind::Verified : Certificate::Kind::Refuted;
  c.provenance = std::move(provenance);
  c.evidence = std::move(evidence);
  return c;
}

RepSet evens() { return RepSet::periodic("", "10"); }

// ---- lemma implementations -------------------------------------------------

Certificate lemma_simetricdif(const LemmaConfig& cfg) {
  ProbeFamily probes = make_probe_family(cfg.ideal, cfg.seed, cfg.bounds);
  std::vector<std::pair<std::string, Certificate>> parts;
  Json prov = make_provenance(cfg.ideal, cfg.seed, cfg.bounds);
  for (size_t i = 0; i < probes.probes.size(); ++i)
    parts.emplace_back("probe-" + std::to_string(i),
                       symdiff_bound_check(probes.probes[i], 2000, prov));
  return aggregate(parts, prov);
}

Certificate lemma_xnoq_density(const LemmaConfig& cfg) {
  ProbeFamily probes = make_probe_family("fin", cfg.seed, cfg.bounds);
  Json prov = make_provenance("fin", cfg.seed, cfg.bounds);
  prov["target"] = "union of A_k, k in evens";
  Certificate cert;
  cert.provenance = prov;
  bool ok = true;
  for (size_t i = 0; i < probes.probes.size(); ++i) {
    auto [l, phi] = dense_witness_in_Am(probes.probes[i], evens(),
                                        cfg.bounds.eq_budget);
    bool in_v = member_basic(phi, probes.probes[i]);
    bool in_block = in_A_m(phi, l + 1);
    ok = ok && in_v && in_block;
    if (i < 8 || !in_v || !in_block) {
      cert.evidence.push_back(Json{{"check", "member_basic"},
                                   {"n", nullptr},
                                   {"phi", phi.to_json()},
                                   {"V", probes.probes[i].to_json()},
                                   {"expect", true}});
      cert.evidence.push_back(Json{{"check", "in_am"},
                                   {"phi", phi.to_json()},
                                   {"m", l + 1},
                                   {"expect", true}});
    }
  }
  cert.evidence.push_back(
      Json{{"check", "note"}, {"probes", probes.probes.size()}});
  cert.kind = ok ? Certificate::Kind::Verified : Certificate::Kind::Refuted;
  return cert;
}

Selector seeded_selector(uint64_t seed, uint64_t instance) {
  Selector s;
  s.E = instance % 2 == 0 ? RepSet::naturals() : evens();
  s.choose = [seed, instance](uint64_t k) {
    std::mt19937_64 g(mix(mix(seed, instance), k));
    Word w;
    for (uint64_t i = 0; i <= k; ++i) w.push_back(g() % 2 ? '1' : '0');
    uint64_t level = g() % (std::min<uint64_t>(k, 3) + 1);
    return ClopenX::canonicalize({Cylinder{level, w}});
  };
  return s;
}

Certificate lemma_xnoq_diagonal(const LemmaConfig& cfg, uint64_t instances,
                                uint64_t depth) {
  Certificate cert;
  cert.provenance = make_provenance(cfg.ideal, cfg.seed, cfg.bounds);
  cert.provenance["instances"] = instances;
  cert.provenance["depth"] = depth;
  bool ok = true;
  for (uint64_t i = 0; i < instances; ++i) {
    Selector s = seeded_selector(cfg.seed, i);
    std::mt19937_64 g(mix(cfg.seed, 0xd1a60000 + i));
    Word w;
    for (uint64_t b = 0; b <= i % 3; ++b) w.push_back(g() % 2 ? '1' : '0');
    ClopenX phi = ClopenX::canonicalize({Cylinder{i % 3, w}});
    DiagonalReport rep = diagonal_avoid_selector(s.E, s, phi, depth);
    ok = ok && rep.ok;
    if (i < 3 || !rep.ok)
      cert.evidence.push_back(Json{{"check", "subcert"},
                                   {"stage", "instance-" + std::to_string(i)},
                                   {"cert", Json{{"schema", kCertSchema},
                                                 {"status", rep.ok ? "verified" : "refuted"},
                                                 {"provenance", Json::object()},
                                                 {"evidence", rep.evidence}}}});
  }
  cert.evidence.push_back(Json{{"check", "note"}, {"instances", instances}});
  cert.kind = ok ? Certificate::Kind::Verified : Certificate::Kind::Refuted;
  return cert;
}

Selector stair_selector() {
  // z_k = [0^k 1] x {0}, a member of A_k.
  Selector s;
  s.E = RepSet::naturals();
  s.choose = [](uint64_t k) {
    Word w(k, '0');
    w.push_back('1');
    return ClopenX::canonicalize({Cylinder{0, w}});
  };
  return s;
}

Certificate lemma_eqclq(const LemmaConfig& cfg) {
  ClopenX phi = ClopenX::canonicalize({Cylinder{0, "1"}});
  std::vector<std::pair<std::string, Certificate>> parts;

  IdealHandle exf = builtin_ideal("empty-x-fin");
  Selector s1 = stair_selector();
  s1.E = RepSet::fiber(RepSet::Axis::Second, 0);
  parts.emplace_back("empty-x-fin", xI_not_qplus(exf, s1.E, phi, s1, 300));

  IdealHandle dz = builtin_ideal("density-zero");
  Selector s2 = stair_selector();
  s2.E = dz.thin_subset(RepSet::naturals());
  parts.emplace_back("density-zero", xI_not_qplus(dz, s2.E, phi, s2, 300));

  return aggregate(parts, make_provenance("empty-x-fin,density-zero", cfg.seed,
                                          cfg.bounds));
}

Certificate lemma_da(const LemmaConfig& cfg) {
  std::vector<std::pair<std::string, Certificate>> parts;
  IdealHandle fin = builtin_ideal("fin");
  parts.emplace_back(
      "dense:evens/fin",
      D_status(evens(), fin, make_probe_family("fin", cfg.seed, cfg.bounds)));
  IdealHandle exf = builtin_ideal("empty-x-fin");
  parts.emplace_back(
      "nwd:row0/empty-x-fin",
      D_status(RepSet::fiber(RepSet::Axis::Second, 0), exf,
               make_probe_family("empty-x-fin", cfg.seed, cfg.bounds)));
  return aggregate(parts,
                   make_provenance("fin,empty-x-fin", cfg.seed, cfg.bounds));
}

Certificate lemma_xinoss(const LemmaConfig& cfg) {
  IdealHandle exf = builtin_ideal("empty-x-fin");
  std::vector<RepSet> A;
  std::vector<std::vector<uint64_t>> K;
  for (uint64_t n = 0; n < 4; ++n) {
    A.push_back(exf.non_pplus_witness(n));
    std::vector<uint64_t> Kn;
    for (uint64_t idx = 1; idx < 5000 && Kn.size() < 2; ++idx)
      if (D_membership(A.back(), enumeration::unrank(idx))) Kn.push_back(idx);
    K.push_back(std::move(Kn));
  }
  Certificate c = xinoSS_certificate(exf, A, K, 6);
  c.provenance["seed"] = cfg.seed;
  return c;
}

Certificate lemma_converseque(const LemmaConfig& cfg) {
  ProbeFamily family = make_probe_family(cfg.ideal, cfg.seed, cfg.bounds);
  auto pool = family.point_pool();
  std::mt19937_64 rng(mix(cfg.seed, 0xc0741));
  Certificate cert;
  cert.provenance = make_provenance(cfg.ideal, cfg.seed, cfg.bounds);
  bool ok = true;
  uint64_t count = cfg.bounds.probe_count;
  for (uint64_t i = 0; i < count; ++i) {
    BasicOpen v;
    v.ideal_tag = cfg.ideal;
    uint64_t negs = 1 + rng() % cfg.bounds.max_constraints;
    for (uint64_t j = 0; j < negs; ++j)
      v.add(false, pool[rng() % pool.size()], rng() % cfg.bounds.max_level);
    ConvergeResult r = converging_sequence(v, cfg.bounds.eq_budget);
    bool valid = r.n_star <= r.N;
    for (uint64_t n = r.n_star; n <= r.n_star + 50; ++n)
      valid = valid && member_basic(x_seq(n), v);
    if (r.n_star > 0)
      valid = valid && !member_basic(x_seq(r.n_star - 1), v);
    ok = ok && valid;
    if (i < 4 || !valid) {
      cert.evidence.push_back(Json{{"check", "member_basic"},
                                   {"n", nullptr},
                                   {"phi", x_seq(r.n_star).to_json()},
                                   {"V", v.to_json()},
                                   {"expect", true}});
      if (r.n_star > 0)
        cert.evidence.push_back(Json{{"check", "member_basic"},
                                     {"n", nullptr},
                                     {"phi", x_seq(r.n_star - 1).to_json()},
                                     {"V", v.to_json()},
                                     {"expect", false}});
      cert.evidence.push_back(Json{{"check", "note"},
                                   {"instance", i},
                                   {"N", r.N},
                                   {"n_star", r.n_star}});
    }
  }
  cert.evidence.push_back(Json{{"check", "note"}, {"instances", count}});
  cert.kind = ok ? Certificate::Kind::Verified : Certificate::Kind::Refuted;
  return cert;
}

Certificate lemma_lemanodec(const LemmaConfig& cfg, uint64_t finite_sets,
                            uint64_t N, uint64_t M) {
  IdealHandle dz = builtin_ideal("density-zero");
  std::mt19937_64 rng(mix(cfg.seed, 0x10dec));
  std::vector<std::pair<std::string, Certificate>> parts;
  for (uint64_t i = 0; i < finite_sets; ++i) {
    std::set<uint64_t> f;
    uint64_t sz = rng() % 7;
    for (uint64_t j = 0; j < sz; ++j) f.insert(rng() % 30);
    parts.emplace_back("finite-" + std::to_string(i),
                       closed_discrete_check(dz, RepSet::finite(f), M, N));
  }
  const std::pair<uint64_t, uint64_t> sparse_params[5] = {
      {0, 1}, {1, 1}, {0, 2}, {2, 3}, {1, 4}};
  for (int i = 0; i < 5; ++i)
    parts.emplace_back(
        "sparse-" + std::to_string(i),
        closed_discrete_check(
            dz, RepSet::sparse(sparse_params[i].first, sparse_params[i].second),
            M, N));
  return aggregate(parts, make_provenance("density-zero", cfg.seed, cfg.bounds));
}

Certificate lemma_gamma(const LemmaConfig& cfg) {
  std::mt19937_64 rng(mix(cfg.seed, 0x6a77a));
  std::vector<std::pair<std::string, Certificate>> parts;
  for (int i = 0; i < 20; ++i) {
    std::set<uint64_t> ones;
    uint64_t sz = rng() % 5;
    for (uint64_t j = 0; j < sz; ++j) ones.insert(rng() % 12);
    uint64_t p = rng() % 3;
    GammaResult g = gamma_preimage(PointB(RepSet::finite(ones)), p, 1000);
    parts.emplace_back("instance-" + std::to_string(i), g.cert);
  }
  return aggregate(parts, make_provenance(cfg.ideal, cfg.seed, cfg.bounds));
}

Certificate lemma_accumulation(const LemmaConfig& cfg) {
  IdealHandle dz = builtin_ideal("density-zero");
  std::vector<std::pair<std::string, Certificate>> parts;
  BasicOpen v;
  v.ideal_tag = "density-zero";
  v.add(true, PointB(RepSet::finite({0, 2})), 0);
  parts.emplace_back("accumulation",
                     accumulation_check(RepSet::naturals(), 0, v, 2000, dz));
  auto [b, cert] = no_convergence_witness(dz, evens());
  parts.emplace_back("no-convergence", cert);
  return aggregate(parts, make_provenance("density-zero", cfg.seed, cfg.bounds));
}

Certificate lemma_xnoq2(const LemmaConfig& cfg, uint64_t k_max) {
  IdealHandle dz = builtin_ideal("density-zero");
  return y_not_qplus(dz, cfg.bounds, k_max).cert;
}

Certificate lemma_yknoss(const LemmaConfig& cfg) {
  Bounds star = cfg.bounds;
  star.index_bound = std::min<uint64_t>(star.index_bound, 2000);
  star.probe_count = std::min<uint64_t>(star.probe_count, 6);
  star.refinement_count = std::min<uint64_t>(star.refinement_count, 6);
  IdealTower tower(star);
  ProbeFamily probes = make_probe_family("fin", cfg.seed, star);
  return yknoss_pipeline(builtin_ideal("power-set"), tower, 3, probes);
}

Certificate lemma_finite_tau_alpha(const LemmaConfig& cfg) {
  const uint64_t expected[4] = {1, 4, 29, 355};
  std::vector<std::pair<std::string, Certificate>> parts;
  bool counts_ok = true;
  Json count_evidence = Json::array();
  for (int n = 1; n <= 4; ++n) {
    auto spaces = enumerate_topologies(n);
    uint64_t preorders = count_preorders(n);
    counts_ok = counts_ok && spaces.size() == expected[n - 1] &&
                preorders == expected[n - 1];
    count_evidence.push_back(Json{{"points", n},
                                  {"topologies", spaces.size()},
                                  {"preorders", preorders},
                                  {"expected", expected[n - 1]}});
    bool all_ok = true;
    for (const auto& x : spaces) {
      Certificate c = check_tau_alpha_identities(x);
      if (c.kind != Certificate::Kind::Verified) {
        all_ok = false;
        parts.emplace_back("failing-space-n" + std::to_string(n), c);
      }
    }
    parts.emplace_back("identities-n" + std::to_string(n),
                       flag(all_ok, Json{{"points", n}},
                            Json::array({Json{{"check", "note"},
                                              {"spaces", spaces.size()}}})));
  }
  parts.emplace_back("counts",
                     flag(counts_ok, Json::object(),
                          Json::array({Json{{"check", "note"},
                                            {"counts", count_evidence}}})));
  return aggregate(parts, make_provenance(cfg.ideal, cfg.seed, cfg.bounds));
}

Certificate lemma_enumeration_roundtrip(const LemmaConfig& cfg) {
  bool ok = enumeration::unrank(0).empty();
  uint64_t q = enumeration::q_index();
  ok = ok && enumeration::unrank(q) ==
                 ClopenX::canonicalize({Cylinder{0, Word()}});
  uint64_t bound = 100000;
  for (uint64_t n = 0; n < bound && ok; ++n)
    ok = enumeration::rank(enumeration::unrank(n)) == n;
  return flag(ok, make_provenance(cfg.ideal, cfg.seed, cfg.bounds),
              Json::array({Json{{"check", "note"},
                                {"roundtrip_bound", bound},
                                {"q_index", q}}}));
}

}  // namespace

const std::vector<std::string>& lemma_ids() {
  static const std::vector<std::string> ids = {
      "enumeration.roundtrip", "simetricdif",  "xnoq.density",
      "xnoq.diagonal",         "eqclq",        "DA.trichotomy",
      "xinoSS",                "converseque",  "Lemanodec.1",
      "gamma",                 "accumulation", "xnoq2",
      "yknoss",                "finite.tau-alpha"};
  return ids;
}

LemmaRun run_lemma(const std::string& id, const LemmaConfig& config) {
  LemmaRun run;
  run.id = id;
  run.config = config;
  Certificate c;
  if (id == "simetricdif") c = lemma_simetricdif(config);
  else if (id == "xnoq.density") c = lemma_xnoq_density(config);
  else if (id == "xnoq.diagonal")
    c = lemma_xnoq_diagonal(config, config.bounds.probe_count, 300);
  else if (id == "eqclq") c = lemma_eqclq(config);
  else if (id == "DA.trichotomy") c = lemma_da(config);
  else if (id == "xinoSS") c = lemma_xinoss(config);
  else if (id == "converseque") c = lemma_converseque(config);
  else if (id == "Lemanodec.1") c = lemma_lemanodec(config, 20, 1000, 16);
  else if (id == "gamma") c = lemma_gamma(config);
  else if (id == "accumulation") c = lemma_accumulation(config);
  else if (id == "xnoq2") c = lemma_xnoq2(config, 200);
  else if (id == "yknoss") c = lemma_yknoss(config);
  else if (id == "finite.tau-alpha") c = lemma_finite_tau_alpha(config);
  else if (id == "enumeration.roundtrip") c = lemma_enumeration_roundtrip(config);
  else throw CforgeError("unknown lemma id: " + id);
  c.provenance["lemma"] = id;
  c.provenance["config"] = config.to_json();
  run.outcome = std::move(c);
  return run;
}

unsigned configured_threads() {
  if (const char* env = std::getenv("CANTOR_FORGE_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return std::max(1u, std::min(hw, 4u));
}

std::vector<LemmaRun> run_all(const LemmaConfig& config, unsigned threads) {
  if (threads == 0) threads = configured_threads();
  const auto& ids = lemma_ids();
  std::vector<LemmaRun> runs(ids.size());
  if (threads <= 1) {
    for (size_t i = 0; i < ids.size(); ++i) runs[i] = run_lemma(ids[i], config);
    return runs;
  }
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < ids.size(); i = next.fetch_add(1))
      runs[i] = run_lemma(ids[i], config);
  };
  std::vector<std::future<void>> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.push_back(std::async(std::launch::async, worker));
  for (auto& f : pool) f.get();
  return runs;
}

namespace {

bool replay_item(const Json& item);

bool replay_psi(uint64_t n, const ClopenX& phi, const BasicOpen& v) {
  auto in = [&](const SubbasicConstraint& c) {
    return c.point(n) || contains_point(phi, c.point, c.level);
  };
  for (const auto& c : v.positives)
    if (!in(c)) return false;
  for (const auto& c : v.negatives)
    if (in(c)) return false;
  return true;
}

bool replay_evidence(const Json& evidence) {
  if (!evidence.is_array()) return false;
  for (const auto& item : evidence)
    if (!replay_item(item)) return false;
  return true;
}

bool replay_item(const Json& item) {
  if (!item.is_object() || !item.contains("check")) return false;
  const std::string check = item["check"].get<std::string>();
  try {
    if (check == "contains") {
      bool got = contains_point(ClopenX::from_json(item.at("phi")),
                                PointB::from_json(item.at("point")),
                                item.at("level").get<uint64_t>());
      return got == item.at("expect").get<bool>();
    }
    if (check == "member_basic") {
      bool got = member_basic(ClopenX::from_json(item.at("phi")),
                              BasicOpen::from_json(item.at("V")));
      return got == item.at("expect").get<bool>();
    }
    if (check == "psi_member") {
      ClopenX phi = ClopenX::from_json(item.at("phi"));
      uint64_t n = item.at("n").get<uint64_t>();
      if (item.contains("V"))
        return replay_psi(n, phi, BasicOpen::from_json(item.at("V"))) ==
               item.at("expect").get<bool>();
      PointB pt = PointB::from_json(item.at("point"));
      bool got = pt(n) || contains_point(phi, pt, item.at("level").get<uint64_t>());
      return got == item.at("expect").get<bool>();
    }
    if (check == "in_am") {
      return in_A_m(ClopenX::from_json(item.at("phi")),
                    item.at("m").get<uint64_t>()) ==
             item.at("expect").get<bool>();
    }
    if (check == "bit") {
      PointB pt = PointB::from_json(item.at("point"));
      return pt(item.at("n").get<uint64_t>()) == item.at("expect").get<bool>();
    }
    if (check == "ideal_member") {
      if (item.at("set").is_null()) return true;
      IdealHandle h = builtin_ideal(item.at("ideal").get<std::string>());
      return to_string(h.member(RepSet::from_json(item.at("set")))) ==
             item.at("result").get<std::string>();
    }
    if (check == "avoids") {
      // The scan itself is bounded search; what replays is well-formedness
      // and nonemptiness of the produced refinement.
      BasicOpen w = BasicOpen::from_json(item.at("refinement"));
      return basic_nonempty(w).state != TriState::No;
    }
    if (check == "dense_in")
      return replay_evidence(item.at("witnesses"));
    if (check == "subcert")
      return replay(Certificate::from_json(item.at("cert")));
    if (check == "symdiff_covered")
      return replay_evidence(item.at("covered_samples"));
    if (check == "note" || check == "trivial" || check == "ones_in_E" ||
        check == "closed_clause" || check == "no_member_found" ||
        check == "no_avoiding_refinement" || check == "symdiff_uncovered")
      return true;  // summaries of bounded scans; structure only
  } catch (const std::exception&) {
    return false;
  }
  return false;  // unknown item shape
}

}  // namespace

bool replay(const Certificate& cert) { return replay_evidence(cert.evidence); }

std::string report_markdown(const std::vector<LemmaRun>& runs) {
  std::ostringstream out;
  out << "# Verification report\n\n";
  out << "| lemma | status | ideal | seed | evidence items |\n";
  out << "|-------|--------|-------|------|----------------|\n";
  for (const auto& r : runs)
    out << "| " << r.id << " | " << Certificate::kind_name(r.outcome.kind)
        << " | " << r.config.ideal << " | " << r.config.seed << " | "
        << r.outcome.evidence.size() << " |\n";
  out << "\nStatuses: verified / refuted / exhausted (bounded search hit its "
         "budget without a verdict).\n";
  return out.str();
}

}  // namespace cforge
