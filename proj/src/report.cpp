#include "chainforge/report.hpp"

#include <sstream>

namespace chainforge {

namespace {

json record_to_json(const StabilityRecord& r) {
  json out{{"n", r.n},
           {"level", r.level},
           {"level_order", order_to_json(r.level_order)},
           {"core_order", order_to_json(r.core_order)},
           {"disc_order", order_to_json(r.disc_order)}};
  if (r.psi_kernel_order) {
    out["psi_kernel_order"] = order_to_json(*r.psi_kernel_order);
  }
  return out;
}

}  // namespace

json stability_report_to_json(const StabilityReport& rep) {
  json records = json::array();
  for (const auto& r : rep.records) records.push_back(record_to_json(r));
  json verdict{{"status", to_string(rep.verdict)}};
  if (rep.verdict == StabilityVerdict::stable_so_far) {
    verdict["n0"] = rep.stable_from;
  }
  if (rep.verdict == StabilityVerdict::wild_evidence) {
    verdict["levels"] = rep.wild_levels;
  }
  if (!rep.note.empty()) verdict["note"] = rep.note;
  return json{{"kind", "stability_report"},
              {"depth", rep.depth},
              {"mode", rep.mode},
              {"records", records},
              {"verdict", verdict}};
}

std::string stability_report_to_csv(const StabilityReport& rep) {
  std::ostringstream os;
  os << "n,level,disc_order,psi_kernel_order\n";
  for (const auto& r : rep.records) {
    os << r.n << ',' << r.level << ',' << r.disc_order.str() << ',';
    if (r.psi_kernel_order) os << r.psi_kernel_order->str();
    os << '\n';
  }
  return os.str();
}

std::string plot_data_csv(const StabilityReport& rep) {
  std::ostringstream os;
  os << "n,level,discriminant_order,kernel_order,mode\n";
  for (const auto& r : rep.records) {
    os << r.n << ',' << r.level << ',' << r.disc_order.str() << ',';
    if (r.psi_kernel_order) os << r.psi_kernel_order->str();
    os << ',' << rep.mode << '\n';
  }
  return os.str();
}

json certificate_to_json(const WildCertificate& cert) {
  json witnesses = json::array();
  for (const auto& w : cert.witnesses) {
    witnesses.push_back(json{{"level", w.level},
                             {"element", element_to_json(w.element)},
                             {"conjugator", element_to_json(w.conjugator)},
                             {"trivial_on_deeper", w.trivial_on_deeper},
                             {"nontrivial_on_shallower",
                              w.nontrivial_on_shallower}});
  }
  json attestations = json::array();
  for (const auto& a : cert.core_attestations) {
    attestations.push_back(json{{"factor", a.factor},
                                {"subject", a.factor_name},
                                {"ok", a.trivial_core}});
  }
  json kernels = json::array();
  for (const auto& k : cert.kernel_orders) kernels.push_back(order_to_json(k));
  return json{{"kind", "wild_certificate"},
              {"verdict", cert.granted ? "wild-evidence" : "refusal"},
              {"refusal_reason", cert.refusal_reason},
              {"witnesses", witnesses},
              {"core_attestations", attestations},
              {"kernel_orders", kernels}};
}

namespace {

json obstructions_to_json(const std::vector<ObstructionEntry>& obs) {
  json out = json::array();
  for (const auto& e : obs) {
    json entry{{"index", e.index}, {"reason", e.reason}};
    if (e.prime != 0) {
      entry["prime"] = e.prime;
      entry["left_exponent"] = e.left_exponent;
      entry["right_exponent"] = e.right_exponent;
    }
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace

json tail_decision_to_json(const TailDecision& d) {
  return json{{"kind", "tail_compare"},
              {"verdict", d.kind == TailDecision::Kind::equivalent_on_window
                              ? "equivalent-on-window"
                              : "distinct-evidence"},
              {"window", d.window},
              {"agree_from", d.agree_from},
              {"criterion", d.criterion},
              {"obstructions", obstructions_to_json(d.obstructions)}};
}

json interleaving_result_to_json(const InterleavingResult& r) {
  json out{{"kind", "interleaving_search"}, {"bound", r.bound}};
  switch (r.kind) {
    case InterleavingResult::Kind::witness: {
      out["outcome"] = "witness";
      json w{{"a_start", r.witness->a_start},
             {"b_start", r.witness->b_start},
             {"p_indices", r.witness->p_indices},
             {"q_indices", r.witness->q_indices},
             {"certification", r.witness->certification}};
      out["witness"] = std::move(w);
      break;
    }
    case InterleavingResult::Kind::exhausted:
      out["outcome"] = "exhausted";
      break;
    case InterleavingResult::Kind::obstructed:
      out["outcome"] = "obstructed";
      break;
  }
  out["obstructions"] = obstructions_to_json(r.obstructions);
  return out;
}

json lenstra_result_to_json(const LenstraResult& r) {
  json levels = json::array();
  for (const auto& lv : r.levels) {
    levels.push_back(json{
        {"m", lv.m},
        {"level_order", order_to_json(lv.level.order_factored())},
        {"core_order", order_to_json(lv.core.order_factored())},
        {"core_identity_ok", lv.core_identity_ok},
        {"recovered_order", lv.recovered.size()},
        {"recovery_ok", lv.recovery_ok}});
  }
  json certs = json::array();
  for (const auto& c : r.trunc.density_certificates) certs.push_back(c);
  return json{{"kind", "lenstra_chain"},
              {"truncation", r.trunc.length},
              {"product_order", order_to_json(r.trunc.product.order_factored())},
              {"dense_order", order_to_json(r.trunc.dense.order_factored())},
              {"dense_is_full_product", r.trunc.dense_is_full_product},
              {"density_certificates", certs},
              {"levels", levels}};
}

json core_report_to_json(const Group& parent, const Subgroup& sub,
                         const Subgroup& core) {
  json gens = json::array();
  for (const auto& g : core.generators()) gens.push_back(element_to_json(g));
  std::string violation;
  bool normal = is_normal_in(parent, core, &violation);
  return json{{"kind", "core_report"},
              {"parent_order", order_to_json(parent.order_factored())},
              {"subgroup_order", order_to_json(sub.order_factored())},
              {"core_order", order_to_json(core.order_factored())},
              {"core_generators", gens},
              {"core_is_normal", normal}};
}

}  // namespace chainforge
