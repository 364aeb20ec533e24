// chainforge - group-chain invariant analyses over finite groups:
// core towers, truncated discriminant groups, stability/wildness evidence,
// product-profinite families and tail-equivalence comparisons.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>

#include "chainforge/errors.hpp"
#include "chainforge/report.hpp"
#include "chainforge/slgroup.hpp"

namespace cf = chainforge;

namespace {

struct CommonOpts {
  std::string out;
  std::string format = "json";
  std::uint64_t max_elements = 0;
};

void write_output(const std::string& out, const std::string& content) {
  if (out.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream f(out);
  if (!f) throw cf::SpecError("cannot write " + out);
  f << content;
}

void write_json(const std::string& out, const cf::json& j) {
  write_output(out, j.dump(2) + "\n");
}

std::string sibling_csv_path(const std::string& out) {
  auto dot = out.find_last_of('.');
  if (dot == std::string::npos) return out + ".csv";
  return out.substr(0, dot) + ".csv";
}

cf::FamilySpec truncate_family(const cf::FamilySpec& fam, std::size_t depth) {
  if (depth == 0 || depth > fam.depth()) {
    throw cf::SpecError("requested depth " + std::to_string(depth) +
                        " is outside the family spec of depth " +
                        std::to_string(fam.depth()));
  }
  cf::FamilySpec out;
  out.primes.assign(fam.primes.begin(), fam.primes.begin() + depth);
  out.bits.assign(fam.bits.begin(), fam.bits.begin() + depth);
  return out;
}

// stability analysis for a family spec honoring the mode; returns the report
// plus a note about how the modes were combined
struct FamilyAnalysis {
  cf::StabilityReport report;
  std::string mode_note;
  bool explicit_ran = false;
  bool modes_agree = false;
};

FamilyAnalysis analyze_family(const cf::FamilySpec& fam,
                              const std::string& mode) {
  FamilyAnalysis out;
  if (mode == "explicit") {
    cf::GroupChain chain = cf::family_to_chain(fam);
    cf::validate_chain(chain);
    out.report = cf::stability_report(chain);
    out.explicit_ran = true;
    out.mode_note = "explicit";
    return out;
  }
  out.report = cf::family_structural_report(fam);
  if (mode == "structural") {
    out.mode_note = "structural";
    return out;
  }
  // both: attempt the explicit realization and compare record by record
  try {
    cf::GroupChain chain = cf::family_to_chain(fam);
    cf::validate_chain(chain);
    cf::StabilityReport explicit_rep = cf::stability_report(chain);
    out.explicit_ran = true;
    out.modes_agree = cf::same_invariant_matrices(out.report, explicit_rep) &&
                      out.report.verdict == explicit_rep.verdict;
    out.mode_note = out.modes_agree ? "both (explicit agrees with structural)"
                                    : "both (MODES DISAGREE)";
    if (!out.modes_agree) {
      throw cf::InternalError(
          "structural and explicit stability reports disagree");
    }
  } catch (const cf::ResourceError& e) {
    out.mode_note = std::string("structural (explicit skipped: ") + e.what() +
                    ")";
  }
  return out;
}

int cmd_analyze(const std::string& chain_path, const CommonOpts& opts,
                const std::string& mode_override, std::size_t depth) {
  cf::json spec = cf::load_json_file(chain_path);
  cf::ChainFile file = cf::parse_chain_file(spec);
  cf::StabilityReport rep;
  std::string mode_note;
  if (file.explicit_chain) {
    cf::ValidatedChain v = cf::validate_chain(*file.explicit_chain);
    rep = cf::stability_report(v.chain);
    mode_note = "explicit";
  } else {
    cf::FamilySpec fam = file.family->spec;
    if (depth > 0) fam = truncate_family(fam, depth);
    std::string mode = mode_override.empty() ? file.family->mode : mode_override;
    FamilyAnalysis fa = analyze_family(fam, mode);
    rep = std::move(fa.report);
    mode_note = fa.mode_note;
  }
  cf::json j = cf::stability_report_to_json(rep);
  j["mode_note"] = mode_note;
  if (opts.format == "csv") {
    write_output(opts.out, cf::stability_report_to_csv(rep));
  } else {
    write_json(opts.out, j);
    if (!opts.out.empty()) {
      write_output(sibling_csv_path(opts.out),
                   cf::stability_report_to_csv(rep));
    }
  }
  return 0;
}

int cmd_family(const std::string& spec_path, const CommonOpts& opts,
               const std::string& mode_override, std::size_t depth) {
  cf::FamilyFile file = cf::parse_family_file(cf::load_json_file(spec_path));
  cf::FamilySpec fam = file.spec;
  if (depth > 0) fam = truncate_family(fam, depth);
  std::string mode = mode_override.empty() ? file.mode : mode_override;

  cf::json discs = cf::json::array();
  for (std::size_t n = 0; n < fam.depth(); ++n) {
    cf::FamilyDiscriminant d = cf::family_discriminants(fam, n);
    cf::json factors = cf::json::array();
    for (const auto& [p, s] : d.factors) {
      factors.push_back(cf::json{{"prime", p}, {"exponent", s}});
    }
    discs.push_back(cf::json{
        {"n", n},
        {"order", cf::order_to_json(d.order)},
        {"factors", factors},
        {"psi_kernel",
         cf::json{{"prime", d.kernel_prime}, {"exponent", d.kernel_exponent}}}});
  }

  cf::ProductSpec prod = cf::family_product_spec(fam);
  cf::SubproductSpec sub = cf::family_subproduct(fam, prod);
  cf::WildCertificate cert = cf::wild_certificate(prod, sub, fam.depth());

  FamilyAnalysis fa = analyze_family(fam, mode);

  cf::json j{{"kind", "family_report"},
             {"primes", fam.primes},
             {"bits", fam.bits},
             {"depth", fam.depth()},
             {"discriminants", discs},
             {"certificate", cf::certificate_to_json(cert)},
             {"stability", cf::stability_report_to_json(fa.report)},
             {"mode_note", fa.mode_note}};
  write_json(opts.out, j);
  return 0;
}

int cmd_compare(const std::string& a_path, const std::string& b_path,
                const CommonOpts& opts, std::size_t bound, std::size_t window) {
  cf::json ja = cf::load_json_file(a_path);
  cf::json jb = cf::load_json_file(b_path);
  bool fam_a = ja.contains("primes");
  bool fam_b = jb.contains("primes");
  if (fam_a != fam_b) {
    throw cf::SpecError("compare needs two family specs or two sequence files");
  }
  cf::json out;
  if (fam_a) {
    cf::FamilySpec a = cf::parse_family_file(ja).spec;
    cf::FamilySpec b = cf::parse_family_file(jb).spec;
    if (window > 0) {
      a = truncate_family(a, window);
      b = truncate_family(b, window);
    }
    cf::TailDecision d = cf::family_tail_decide(a, b);
    cf::HomSequence sa = cf::family_sequence(a);
    cf::HomSequence sb = cf::family_sequence(b);
    cf::InterleavingResult r = cf::interleaving_search(
        sa, sb, bound > 0 ? bound : a.depth());
    out = cf::tail_decision_to_json(d);
    out["search"] = cf::interleaving_result_to_json(r);
  } else {
    cf::HomSequence a = cf::parse_sequence_file(ja);
    cf::HomSequence b = cf::parse_sequence_file(jb);
    cf::check_sequence(a);
    cf::check_sequence(b);
    cf::InterleavingResult r =
        cf::interleaving_search(a, b, bound > 0 ? bound : a.length());
    out = cf::interleaving_result_to_json(r);
  }
  write_json(opts.out, out);
  return 0;
}

int cmd_core(const std::string& group_path, const std::string& subgroup_path,
             const CommonOpts& opts) {
  cf::Group g = cf::parse_group(cf::load_json_file(group_path));
  cf::Subgroup h = cf::parse_subgroup(cf::load_json_file(subgroup_path), g);
  cf::Subgroup core = cf::normal_core(g, h);
  write_json(opts.out, cf::core_report_to_json(g, h, core));
  return 0;
}

int cmd_lenstra(const std::string& spec_path, const CommonOpts& opts,
                std::size_t depth) {
  cf::FamilyFile file = cf::parse_family_file(cf::load_json_file(spec_path));
  cf::FamilySpec fam = file.spec;
  if (depth > 0) fam = truncate_family(fam, depth);
  cf::ProductSpec prod = cf::family_product_spec(fam);
  cf::SubproductSpec sub = cf::family_subproduct(fam, prod);
  cf::LenstraResult res = cf::lenstra_chain(prod, sub, fam.depth());
  write_json(opts.out, cf::lenstra_result_to_json(res));
  return 0;
}

int cmd_plot_data(const std::string& chain_path, const std::string& spec_path,
                  const CommonOpts& opts, const std::string& mode_override,
                  std::size_t depth) {
  cf::StabilityReport rep;
  if (!chain_path.empty()) {
    cf::ChainFile file = cf::parse_chain_file(cf::load_json_file(chain_path));
    if (file.explicit_chain) {
      cf::validate_chain(*file.explicit_chain);
      rep = cf::stability_report(*file.explicit_chain);
    } else {
      cf::FamilySpec fam = file.family->spec;
      if (depth > 0) fam = truncate_family(fam, depth);
      std::string mode =
          mode_override.empty() ? file.family->mode : mode_override;
      rep = analyze_family(fam, mode).report;
    }
  } else if (!spec_path.empty()) {
    cf::FamilyFile file = cf::parse_family_file(cf::load_json_file(spec_path));
    cf::FamilySpec fam = file.spec;
    if (depth > 0) fam = truncate_family(fam, depth);
    std::string mode = mode_override.empty() ? file.mode : mode_override;
    rep = analyze_family(fam, mode).report;
  } else {
    throw cf::SpecError("plot-data needs --chain or --spec");
  }
  write_output(opts.out, cf::plot_data_csv(rep));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chainforge: group-chain discriminant invariants"};
  app.require_subcommand(1);

  CommonOpts opts;
  app.add_option("--max-elements", opts.max_elements,
                 "enumeration bound (elements)")
      ->envname("CHAINFORGE_MAX_ELEMENTS");

  std::string chain_path, spec_path, a_path, b_path, group_path, subgroup_path;
  std::string mode_override;
  std::size_t depth = 0, bound = 0, window = 0;

  auto* analyze = app.add_subcommand("analyze", "stability report for a chain");
  analyze->add_option("--chain", chain_path, "chain spec file")->required();
  analyze->add_option("--depth", depth, "truncate a profinite chain");
  analyze->add_option("--mode", mode_override, "structural|explicit|both");
  analyze->add_option("--out", opts.out, "output path");
  analyze->add_option("--format", opts.format, "json|csv");

  auto* family = app.add_subcommand("family", "family discriminants and certificate");
  family->add_option("--spec", spec_path, "family spec file")->required();
  family->add_option("--depth", depth, "truncate the family");
  family->add_option("--mode", mode_override, "structural|explicit|both");
  family->add_option("--out", opts.out, "output path");

  auto* compare = app.add_subcommand("compare", "tail-equivalence comparison");
  compare->add_option("--a", a_path, "first spec")->required();
  compare->add_option("--b", b_path, "second spec")->required();
  compare->add_option("--bound", bound, "interleaving search bound");
  compare->add_option("--window", window, "restrict the examined window");
  compare->add_option("--out", opts.out, "output path");

  auto* core = app.add_subcommand("core", "normal core of a subgroup");
  core->add_option("--group", group_path, "group descriptor file")->required();
  core->add_option("--subgroup", subgroup_path, "subgroup descriptor file")
      ->required();
  core->add_option("--out", opts.out, "output path");

  auto* lenstra = app.add_subcommand("lenstra", "explicit chain recovery run");
  lenstra->add_option("--spec", spec_path, "family spec file")->required();
  lenstra->add_option("--depth", depth, "truncation depth");
  lenstra->add_option("--out", opts.out, "output path");

  auto* plot = app.add_subcommand("plot-data", "tidy CSV for plotting");
  plot->add_option("--chain", chain_path, "chain spec file");
  plot->add_option("--spec", spec_path, "family spec file");
  plot->add_option("--depth", depth, "truncate a family");
  plot->add_option("--mode", mode_override, "structural|explicit|both");
  plot->add_option("--out", opts.out, "output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (opts.max_elements > 0) cf::set_enumeration_limit(opts.max_elements);
    if (opts.format != "json" && opts.format != "csv") {
      throw cf::SpecError("--format must be json or csv");
    }
    if (analyze->parsed()) {
      return cmd_analyze(chain_path, opts, mode_override, depth);
    }
    if (family->parsed()) {
      return cmd_family(spec_path, opts, mode_override, depth);
    }
    if (compare->parsed()) {
      return cmd_compare(a_path, b_path, opts, bound, window);
    }
    if (core->parsed()) return cmd_core(group_path, subgroup_path, opts);
    if (lenstra->parsed()) return cmd_lenstra(spec_path, opts, depth);
    if (plot->parsed()) {
      return cmd_plot_data(chain_path, spec_path, opts, mode_override, depth);
    }
    throw cf::SpecError("no subcommand selected");
  } catch (const cf::ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return 3;
  } catch (const cf::InternalError& e) {
    std::cerr << "internal invariant violation: " << e.what() << "\n";
    return 4;
  } catch (const cf::SpecError& e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
