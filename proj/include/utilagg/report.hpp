#pragma once

/// @file report.hpp
/// Machine-readable reports for the command-line driver. Every report is an
/// ordered JSON object with a fixed key order and a top-level "status" of
/// "PASS" or "FAIL"; witnesses name states by id and carry exact rationals.

#include <functional>
#include <future>
#include <string>
#include <utility>
#include <vector>

#include "utilagg/coincidence.hpp"
#include "utilagg/harsanyi.hpp"
#include "utilagg/harvey.hpp"
#include "utilagg/society_io.hpp"

namespace utilagg {

namespace report_detail {

inline Json pair_json(const StateSpace& sp, const StatePair& p) { return Json{{"x", sp.id(p.first)}, {"y", sp.id(p.second)}}; }

inline Json lottery_json(const StateSpace& sp, const SimpleLottery& p) {
  Json j = Json::object();
  for (const auto& [s, pr] : p.support()) j[sp.id(s)] = pr.str();
  return j;
}

inline Json rationals(const std::vector<Rational>& xs) {
  Json j = Json::array();
  for (const auto& x : xs) j.push_back(x.str());
  return j;
}

inline Json weights_json(const Weights& w) { return Json{{"a", rationals(w.a)}, {"b", w.b.str()}}; }

inline Json witness_pair_json(const StateSpace& sp, const LotteryWitnessPair& w, const UtilityTable* v) {
  Json j{{"P", lottery_json(sp, w.p)}, {"Q", lottery_json(sp, w.q)}, {"lambda", w.lambda.str()}};
  if (v) {
    j["E_P[v]"] = expectation(w.p, *v).str();
    j["E_Q[v]"] = expectation(w.q, *v).str();
  }
  return j;
}

inline Json check(std::string name, bool pass, Json witness = nullptr, std::string detail = {}) {
  return Json{{"name", std::move(name)},
              {"status", pass ? "PASS" : "FAIL"},
              {"witness", std::move(witness)},
              {"detail", std::move(detail)}};
}

inline Json error_check(std::string name, const std::string& what) {
  return Json{{"name", std::move(name)}, {"status", "ERROR"}, {"witness", nullptr}, {"detail", what}};
}

}  // namespace report_detail

struct ValidateOptions {
  SemiSeparabilityOptions semi_separability;
  unsigned threads = 1;
  unsigned extension_depth = 1;
};

/// The axiom battery: Pareto, semi-separability, matching (with an Alt
/// profile), probabilistic extension (with an NM profile), axiom (i) and
/// axiom (I). Checks run on up to `threads` workers; the report order is
/// fixed.
inline Json validate_report(const SocietyFile& f, const ValidateOptions& opt = {}) {
  using namespace report_detail;
  const Society& soc = f.society;
  const StateSpace& sp = soc.space();
  std::vector<std::pair<std::string, std::function<Json()>>> tasks;

  tasks.emplace_back("Pareto", [&] {
    auto v = check_pareto_criterion(soc);
    return check("Pareto", v.pass(), v.pass() ? Json(nullptr) : pair_json(sp, *v.witness),
                 v.pass() ? "" : "x Pareto-dominates y but is not ethically better");
  });
  tasks.emplace_back("semi-separability", [&] {
    auto v = check_semi_separable(soc, opt.semi_separability);
    Json w = nullptr;
    if (!v.pass()) {
      w = Json::array();
      for (auto s : *v.witness) w.push_back(sp.id(s));
    }
    return check("semi-separability", v.pass(), std::move(w),
                 v.pass() ? "" : "no state is indifferent to the i-th listed state for every agent i");
  });
  if (soc.alt()) {
    for (std::size_t i = 0; i <= soc.n(); ++i) {
      const bool eth = i == soc.n();
      std::string name = "matching (" + (eth ? std::string("ethical") : soc.name(i)) + ")";
      tasks.emplace_back(name, [&, i, eth, name] {
        const WeakOrder& order = eth ? soc.ethical() : soc.individual(i);
        const UtilityTable& u = eth ? soc.alt()->ethical : soc.alt()->agents[i];
        auto v = matches(order, AltSystem::by_utility(u));
        return check(name, v.pass(), v.pass() ? Json(nullptr) : pair_json(sp, *v.witness),
                     v.pass() ? "" : "x >= y disagrees with [x,y] >= [y,y]");
      });
    }
  }
  if (soc.nm()) {
    for (std::size_t i = 0; i <= soc.n(); ++i) {
      const bool eth = i == soc.n();
      std::string name = "probabilistic extension (" + (eth ? std::string("ethical") : soc.name(i)) + ")";
      tasks.emplace_back(name, [&, i, eth, name] {
        const WeakOrder& base = eth ? soc.ethical() : soc.individual(i);
        const UtilityTable& u = eth ? soc.nm()->ethical : soc.nm()->agents[i];
        auto lotteries = dirac_and_pairwise_lotteries(sp.size(), opt.extension_depth);
        std::vector<Rational> e;
        for (const auto& p : lotteries) e.push_back(expectation(p, u));
        auto v = check_probabilistic_extension(lotteries, WeakOrder::by_utility(UtilityTable(std::move(e))), base);
        return check(name, v.pass(), v.pass() ? Json(nullptr) : pair_json(sp, *v.witness),
                     v.pass() ? "" : "x >= y disagrees with delta_x >= delta_y");
      });
    }
  }
  tasks.emplace_back("axiom (i)", [&] {
    Profile p = lottery_profile(soc);
    auto v = check_axiom_i(p);
    return check("axiom (i)", v.pass(), v.pass() ? Json(nullptr) : witness_pair_json(sp, *v.witness, &p.ethical),
                 v.pass() ? "" : "every agent is indifferent between P and Q, the ethical order is not");
  });
  tasks.emplace_back("axiom (I)", [&] {
    Profile p = alt_profile(soc);
    auto v = check_axiom_I(p);
    Json w = nullptr;
    if (!v.pass()) {
      const auto& q = *v.witness;
      w = Json::array({Json::array({sp.id(q[0]), sp.id(q[1])}), Json::array({sp.id(q[2]), sp.id(q[3])})});
    }
    return check("axiom (I)", v.pass(), std::move(w),
                 v.pass() ? "" : "the two improvements are equal for every agent but not ethically");
  });

  std::vector<Json> results(tasks.size());
  auto run = [&](std::size_t k) {
    try {
      results[k] = tasks[k].second();
    } catch (const Error& e) {
      results[k] = error_check(tasks[k].first, e.what());
    }
  };
  const std::size_t width = std::max(1u, opt.threads);
  for (std::size_t start = 0; start < tasks.size(); start += width) {
    std::vector<std::future<void>> batch;
    for (std::size_t k = start; k < std::min(tasks.size(), start + width); ++k)
      batch.push_back(std::async(width > 1 ? std::launch::async : std::launch::deferred, run, k));
    for (auto& fut : batch) fut.get();
  }

  bool all = true;
  Json checks = Json::array();
  for (auto& r : results) {
    all = all && r["status"] == "PASS";
    checks.push_back(std::move(r));
  }
  return Json{{"command", "validate"},
              {"title", f.title ? Json(*f.title) : Json(nullptr)},
              {"states", sp.size()},
              {"agents", soc.n()},
              {"checks", std::move(checks)},
              {"status", all ? "PASS" : "FAIL"}};
}

inline Json harsanyi_report(const SocietyFile& f) {
  using namespace report_detail;
  const Society& soc = f.society;
  Profile p = lottery_profile(soc);
  WeightReport r = recover_weights(p);
  Json basis = Json::array();
  for (auto i : r.basis.members) basis.push_back(soc.name(i));
  Json j{{"command", "recover"},
         {"mode", "harsanyi"},
         {"title", f.title ? Json(*f.title) : Json(nullptr)},
         {"recovered", r.recovered},
         {"weights", r.recovered ? weights_json(r.weights) : Json(nullptr)},
         {"unique", r.unique},
         {"basis", std::move(basis)},
         {"positive_variant", r.positive_variant ? weights_json(*r.positive_variant) : Json(nullptr)},
         {"residual_state", r.residual_state ? Json(soc.space().id(*r.residual_state)) : Json(nullptr)},
         {"witness", r.witness ? witness_pair_json(soc.space(), *r.witness, &p.ethical) : Json(nullptr)},
         {"status", r.recovered ? "PASS" : "FAIL"}};
  return j;
}

inline Json harvey_report(const SocietyFile& f, const SemiSeparabilityOptions& ss = {}) {
  using namespace report_detail;
  const Society& soc = f.society;
  Json j{{"command", "recover"}, {"mode", "harvey"}, {"title", f.title ? Json(*f.title) : Json(nullptr)}};
  try {
    HarveyReport r = recover_harvey(alt_profile(soc), ss);
    Json constant = Json::array();
    for (std::size_t i = 0; i < r.constant_agent.size(); ++i)
      if (r.constant_agent[i]) constant.push_back(soc.name(i));
    j["recovered"] = true;
    j["weights"] = weights_json(r.weights);
    j["constant_agents"] = std::move(constant);
    j["chain_triples_checked"] = r.chain_triples_checked;
    j["chain_exhaustive"] = r.chain_exhaustive;
    j["failed_step"] = nullptr;
    j["detail"] = "";
    j["status"] = "PASS";
  } catch (const HypothesisError& e) {
    j["recovered"] = false;
    j["weights"] = nullptr;
    j["constant_agents"] = Json::array();
    j["chain_triples_checked"] = 0;
    j["chain_exhaustive"] = false;
    j["failed_step"] = e.hypothesis();
    j["detail"] = e.what();
    j["status"] = "FAIL";
  }
  return j;
}

inline Json hypotheses_json(const std::vector<HypothesisResult>& hs) {
  Json j = Json::array();
  for (const auto& h : hs)
    j.push_back(Json{{"name", h.name}, {"status", h.pass ? "PASS" : "FAIL"}, {"blocking", h.blocking}, {"detail", h.detail}});
  return j;
}

inline Json agent_verdict_json(const Society& soc, std::size_t i, const AgentVerdict& v) {
  using namespace report_detail;
  const StateSpace& sp = soc.space();
  Json j{{"name", soc.name(i)},
         {"verdict", to_string(v.kind)},
         {"alpha", v.affine ? Json(v.affine->alpha.str()) : Json(nullptr)},
         {"beta", v.affine ? Json(v.affine->beta.str()) : Json(nullptr)}};
  if (v.chain) {
    Json z = Json::array(), w = Json::array();
    for (auto s : v.chain->z) z.push_back(sp.id(s));
    for (auto s : v.chain->w) w.push_back(sp.id(s));
    j["chain"] = Json{{"driver", v.chain->driver},
                      {"partner", soc.name(v.chain->partner)},
                      {"step", v.chain->step.str()},
                      {"z", std::move(z)},
                      {"w", std::move(w)},
                      {"increments", rationals(v.chain->increments)},
                      {"partner_gap", v.chain->partner_gap.str()}};
  } else {
    j["chain"] = nullptr;
  }
  j["unequal_step"] = v.unequal_step ? Json(*v.unequal_step) : Json(nullptr);
  j["ethical_mismatch"] = v.ethical_mismatch ? pair_json(sp, *v.ethical_mismatch) : Json(nullptr);
  j["detail"] = v.detail;
  return j;
}

inline Json coincide_report(const SocietyFile& f, const Theorem3Options& opt = {}) {
  using namespace report_detail;
  const Society& soc = f.society;
  Theorem3Report r = theorem3_pipeline(soc, opt);
  Json agents = Json::array();
  for (std::size_t i = 0; i < r.verdicts.size(); ++i) agents.push_back(agent_verdict_json(soc, i, r.verdicts[i]));
  Json norm = nullptr;
  if (r.normalization)
    norm = Json{{"alt_weights", weights_json(r.normalization->alt_weights)},
                {"nm_weights", weights_json(r.normalization->nm_weights)}};
  const HypothesisResult* blocked = r.first_blocking_failure();
  return Json{{"command", "coincide"},
              {"title", f.title ? Json(*f.title) : Json(nullptr)},
              {"hypotheses", hypotheses_json(r.hypotheses)},
              {"normalization", std::move(norm)},
              {"proposition_hypotheses", r.proposition ? hypotheses_json(r.proposition->hypotheses) : Json::array()},
              {"agents", std::move(agents)},
              {"blocked_by", blocked ? Json(blocked->name) : Json(nullptr)},
              {"status", r.all_coincide() && std::all_of(r.hypotheses.begin(), r.hypotheses.end(),
                                                         [](const auto& h) { return h.pass; })
                             ? "PASS"
                             : "FAIL"}};
}

/// Plain-text rendering of any report above.
inline std::string render_text(const Json& r) {
  std::string out;
  auto line = [&](const std::string& s) { out += s + "\n"; };
  auto compact = [](const Json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); };
  const std::string cmd = r.at("command");
  if (r.contains("title") && r["title"].is_string()) line("# " + r["title"].get<std::string>());
  if (cmd == "validate") {
    line("states " + std::to_string(r["states"].get<std::size_t>()) + ", agents " +
         std::to_string(r["agents"].get<std::size_t>()));
    for (const auto& c : r["checks"]) {
      std::string s = c["status"].get<std::string>() + "  " + c["name"].get<std::string>();
      if (!c["witness"].is_null()) s += "  witness " + compact(c["witness"]);
      if (!c["detail"].get<std::string>().empty()) s += "  (" + c["detail"].get<std::string>() + ")";
      line(s);
    }
  } else if (cmd == "recover") {
    line("mode " + r["mode"].get<std::string>());
    if (!r["weights"].is_null()) {
      line("a = " + compact(r["weights"]["a"]));
      line("b = " + r["weights"]["b"].get<std::string>());
    }
    for (const char* key : {"unique", "basis", "positive_variant", "residual_state", "witness", "constant_agents",
                            "chain_triples_checked", "chain_exhaustive", "failed_step", "detail"})
      if (r.contains(key) && !r[key].is_null() && !(r[key].is_string() && r[key].get<std::string>().empty()))
        line(std::string(key) + " = " + compact(r[key]));
  } else if (cmd == "coincide") {
    for (const auto& h : r["hypotheses"]) {
      std::string s = h["status"].get<std::string>() + "  " + h["name"].get<std::string>();
      if (!h["blocking"].get<bool>()) s += " [non-blocking]";
      if (!h["detail"].get<std::string>().empty()) s += "  (" + h["detail"].get<std::string>() + ")";
      line(s);
    }
    for (const auto& h : r["proposition_hypotheses"])
      if (h["status"] != "PASS")
        line("FAIL  " + h["name"].get<std::string>() + (h["blocking"].get<bool>() ? "" : " [non-blocking]") + "  (" +
             h["detail"].get<std::string>() + ")");
    if (!r["normalization"].is_null()) {
      line("alt weights a = " + compact(r["normalization"]["alt_weights"]["a"]) +
           ", b = " + r["normalization"]["alt_weights"]["b"].get<std::string>());
      line("nm weights a* = " + compact(r["normalization"]["nm_weights"]["a"]) +
           ", b* = " + r["normalization"]["nm_weights"]["b"].get<std::string>());
    }
    for (const auto& a : r["agents"]) {
      std::string s = "agent " + a["name"].get<std::string>() + ": " + a["verdict"].get<std::string>();
      if (!a["alpha"].is_null())
        s += "  u* = " + a["alpha"].get<std::string>() + " u + " + a["beta"].get<std::string>();
      if (!a["chain"].is_null()) s += "  increments " + compact(a["chain"]["increments"]);
      if (!a["ethical_mismatch"].is_null()) s += "  ethical mismatch " + compact(a["ethical_mismatch"]);
      line(s);
    }
    if (!r["blocked_by"].is_null()) line("blocked by " + r["blocked_by"].get<std::string>());
  }
  line(r.at("status").get<std::string>());
  return out;
}

}  // namespace utilagg
