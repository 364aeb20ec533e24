#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kWorkDir = fs::temp_directory_path() / "chainforge_cli_tests";

struct RunResult {
  int exit_code;
  std::string output;
  std::string error;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spit(const fs::path& p, const std::string& content) {
  std::ofstream out(p);
  out << content;
}

RunResult run_cli(const std::string& args) {
  fs::create_directories(kWorkDir);
  fs::path out = kWorkDir / "stdout.txt";
  fs::path err = kWorkDir / "stderr.txt";
  std::string cmd = std::string(CHAINFORGE_CLI_PATH) + " " + args + " > " +
                    out.string() + " 2> " + err.string();
  int status = std::system(cmd.c_str());
  int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return RunResult{code, slurp(out), slurp(err)};
}

fs::path write_spec(const std::string& name, const json& j) {
  fs::create_directories(kWorkDir);
  fs::path p = kWorkDir / name;
  spit(p, j.dump(2));
  return p;
}

json perm_list(std::vector<std::vector<int>> perms) {
  json out = json::array();
  for (const auto& p : perms) out.push_back(p);
  return out;
}

json subgroup_of(std::vector<std::vector<int>> perms) {
  json j;
  j["generators"] = perm_list(std::move(perms));
  return j;
}

json s4_group() {
  json j;
  j["kind"] = "permutation";
  j["degree"] = 4;
  j["generators"] = perm_list({{1, 0, 2, 3}, {1, 2, 3, 0}});
  return j;
}

json normal_chain_spec() {
  json j;
  j["mode"] = "explicit";
  j["base"] = s4_group();
  j["levels"] = json::array();
  j["levels"].push_back(subgroup_of({{1, 2, 0, 3}, {0, 2, 3, 1}}));  // A4
  j["levels"].push_back(subgroup_of({{1, 0, 3, 2}, {2, 3, 0, 1}}));  // V4
  j["levels"].push_back(subgroup_of({{0, 1, 2, 3}}));                // trivial
  return j;
}

json family_spec(std::vector<std::uint64_t> primes, std::vector<int> bits,
                 const std::string& mode = "") {
  json j{{"primes", primes}, {"bits", bits}};
  if (!mode.empty()) j["mode"] = mode;
  return j;
}

}  // namespace

TEST_CASE("analyze: normal chain is stable-so-far, outputs are deterministic") {
  fs::path spec = write_spec("normal_chain.json", normal_chain_spec());
  fs::path out = kWorkDir / "normal_report.json";
  RunResult r = run_cli("analyze --chain " + spec.string() + " --out " +
                        out.string());
  REQUIRE(r.exit_code == 0);
  json rep = json::parse(slurp(out));
  CHECK(rep.at("verdict").at("status") == "stable-so-far");
  CHECK(rep.at("verdict").at("n0") == 0);
  // the CSV lands next to the JSON
  std::string csv = slurp(kWorkDir / "normal_report.csv");
  CHECK(csv.find("n,level,disc_order,psi_kernel_order") == 0);
  CHECK(csv.find("0,3,1,1") != std::string::npos);

  std::string first = slurp(out);
  RunResult again = run_cli("analyze --chain " + spec.string() + " --out " +
                            out.string());
  REQUIRE(again.exit_code == 0);
  CHECK(first == slurp(out));  // byte-identical rerun
}

TEST_CASE("analyze: big wild family falls back to structural mode") {
  fs::path spec = write_spec(
      "family_chain.json",
      json{{"mode", "profinite"},
           {"family", family_spec({2, 3, 5, 7}, {1, 2, 1, 2})}});
  fs::path out = kWorkDir / "family_report.json";
  RunResult r =
      run_cli("analyze --chain " + spec.string() + " --out " + out.string());
  REQUIRE(r.exit_code == 0);
  json rep = json::parse(slurp(out));
  CHECK(rep.at("verdict").at("status") == "wild-evidence");
  CHECK(rep.at("verdict").at("levels") == json::array({0, 1, 2, 3}));
}

TEST_CASE("analyze: explicit mode on the (2,3) family cross-checks") {
  fs::path spec = write_spec(
      "family23.json", json{{"mode", "profinite"},
                            {"family", family_spec({2, 3}, {2, 1}, "both")}});
  fs::path out = kWorkDir / "family23.json.out";
  RunResult r =
      run_cli("analyze --chain " + spec.string() + " --out " + out.string());
  REQUIRE(r.exit_code == 0);
  json rep = json::parse(slurp(out));
  CHECK(rep.at("verdict").at("status") == "wild-evidence");
  CHECK(rep.at("mode_note").get<std::string>().find("agrees") !=
        std::string::npos);
}

TEST_CASE("analyze: malformed specs name the offending field, exit 2") {
  fs::path bad = write_spec("bad.json", json{{"mode", "profinite"},
                                             {"family", json{{"bits", {1}}}}});
  RunResult r = run_cli("analyze --chain " + bad.string());
  CHECK(r.exit_code == 2);
  CHECK(r.error.find("primes") != std::string::npos);

  fs::path nonchain = write_spec("nonchain.json", json{{"mode", "weird"}});
  RunResult r2 = run_cli("analyze --chain " + nonchain.string());
  CHECK(r2.exit_code == 2);
}

TEST_CASE("explicitly requested oversized runs exit with the resource code") {
  fs::path spec = write_spec(
      "family_big.json",
      json{{"mode", "profinite"},
           {"family", family_spec({2, 3, 5, 7, 11}, {1, 1, 1, 1, 1})}});
  RunResult r = run_cli("analyze --chain " + spec.string() +
                        " --mode explicit");
  CHECK(r.exit_code == 3);
}

TEST_CASE("compare: families on windows and the exit-code contract") {
  fs::path a = write_spec("fam_a.json", family_spec({2, 3, 5, 7}, {1, 2, 1, 2}));
  fs::path b = write_spec("fam_b.json", family_spec({2, 3, 5, 7}, {2, 2, 1, 2}));
  fs::path c = write_spec("fam_c.json", family_spec({2, 3, 5, 7}, {2, 1, 2, 1}));
  fs::path out = kWorkDir / "cmp.json";

  RunResult same = run_cli("compare --a " + a.string() + " --b " + a.string() +
                           " --out " + out.string());
  REQUIRE(same.exit_code == 0);
  CHECK(json::parse(slurp(out)).at("verdict") == "equivalent-on-window");

  RunResult shift = run_cli("compare --a " + a.string() + " --b " + b.string() +
                            " --out " + out.string());
  REQUIRE(shift.exit_code == 0);
  json shifted = json::parse(slurp(out));
  CHECK(shifted.at("verdict") == "equivalent-on-window");
  CHECK(shifted.at("agree_from") == 1);
  CHECK(shifted.at("search").at("outcome") == "witness");

  RunResult anti = run_cli("compare --a " + a.string() + " --b " + c.string() +
                           " --out " + out.string());
  REQUIRE(anti.exit_code == 0);  // verdicts are data, not exit codes
  json distinct = json::parse(slurp(out));
  CHECK(distinct.at("verdict") == "distinct-evidence");
  CHECK(distinct.at("obstructions").size() == 4);

  fs::path other = write_spec("fam_d.json", family_spec({2, 3, 5, 11}, {1, 2, 1, 2}));
  RunResult bad = run_cli("compare --a " + a.string() + " --b " + other.string());
  CHECK(bad.exit_code == 2);
}

TEST_CASE("core: S4/A4 and the family subgroup inside SL3(Z/5Z)") {
  fs::path g = write_spec("s4.json", s4_group());
  fs::path h = write_spec("a4.json", subgroup_of({{1, 2, 0, 3}, {0, 2, 3, 1}}));
  fs::path out = kWorkDir / "core.json";
  RunResult r = run_cli("core --group " + g.string() + " --subgroup " +
                        h.string() + " --out " + out.string());
  REQUIRE(r.exit_code == 0);
  json rep = json::parse(slurp(out));
  CHECK(rep.at("core_order") == 12);
  CHECK(rep.at("core_is_normal") == true);

  fs::path sl = write_spec("sl35.json", json{{"kind", "sl"}, {"n", 3}, {"mod", 5}});
  fs::path a25 = write_spec(
      "a25.json", json{{"kind", "family_subgroup"}, {"p", 5}, {"variant", 2}});
  RunResult r2 = run_cli("core --group " + sl.string() + " --subgroup " +
                         a25.string() + " --out " + out.string());
  REQUIRE(r2.exit_code == 0);
  CHECK(json::parse(slurp(out)).at("core_order") == 1);

  // wrong-degree subgroup generators make no sense for S4
  fs::path badsub = write_spec("badsub.json", subgroup_of({{1, 0, 2, 3, 4, 5}}));
  RunResult r3 =
      run_cli("core --group " + g.string() + " --subgroup " + badsub.string());
  CHECK(r3.exit_code == 2);
}

TEST_CASE("lenstra: recovery identities hold on the (2,3) window") {
  fs::path spec = write_spec("lenstra23.json", family_spec({2, 3}, {1, 1}));
  fs::path out = kWorkDir / "lenstra.json";
  RunResult r =
      run_cli("lenstra --spec " + spec.string() + " --out " + out.string());
  REQUIRE(r.exit_code == 0);
  json rep = json::parse(slurp(out));
  CHECK(rep.at("dense_is_full_product") == true);
  for (const auto& level : rep.at("levels")) {
    CHECK(level.at("core_identity_ok") == true);
    CHECK(level.at("recovery_ok") == true);
  }
  CHECK(rep.at("levels")[1].at("recovered_order") == 6);  // |D^2| = 2*3
}

TEST_CASE("family: certificate and discriminants in one report") {
  fs::path spec = write_spec("fam_big5.json",
                             family_spec({2, 3, 5, 7, 11}, {1, 2, 1, 2, 1}));
  fs::path out = kWorkDir / "family_cmd.json";
  RunResult r = run_cli("family --spec " + spec.string() +
                        " --mode structural --out " + out.string());
  REQUIRE(r.exit_code == 0);
  json rep = json::parse(slurp(out));
  CHECK(rep.at("certificate").at("verdict") == "wild-evidence");
  CHECK(rep.at("certificate").at("witnesses").size() == 5);
  CHECK(rep.at("discriminants")[0].at("psi_kernel").at("prime") == 2);
  CHECK(rep.at("discriminants")[0].at("psi_kernel").at("exponent") == 1);
  // D_1 at depth 5: 3^2 * 5 * 7^2 * 11 = 24255
  CHECK(rep.at("discriminants")[1].at("order") == 24255);
  CHECK(rep.at("stability").at("verdict").at("status") == "wild-evidence");
}

TEST_CASE("compare accepts raw sequence files") {
  json seq_a;
  seq_a["structural"] = json{{"orders", {8, 4, 2}}, {"kernel_orders", {2, 2}}};
  json seq_b;
  seq_b["structural"] = json{{"orders", {12, 6, 3}}, {"kernel_orders", {2, 2}}};
  fs::path a = write_spec("seq_a.json", seq_a);
  fs::path b = write_spec("seq_b.json", seq_b);
  fs::path out = kWorkDir / "seqcmp.json";

  RunResult same = run_cli("compare --a " + a.string() + " --b " + a.string() +
                           " --out " + out.string());
  REQUIRE(same.exit_code == 0);
  CHECK(json::parse(slurp(out)).at("outcome") == "witness");

  RunResult diff = run_cli("compare --a " + a.string() + " --b " + b.string() +
                           " --out " + out.string());
  REQUIRE(diff.exit_code == 0);
  // final orders 2 vs 3 admit no surjection either way
  CHECK(json::parse(slurp(out)).at("outcome") == "obstructed");
}

TEST_CASE("the environment variable overrides the enumeration bound") {
  fs::path spec = write_spec("normal_chain_env.json", normal_chain_spec());
  RunResult r = run_cli("analyze --chain " + spec.string());
  CHECK(r.exit_code == 0);
  fs::create_directories(kWorkDir);
  fs::path out = kWorkDir / "env_stdout.txt";
  fs::path err = kWorkDir / "env_stderr.txt";
  std::string cmd = std::string("CHAINFORGE_MAX_ELEMENTS=10 ") +
                    CHAINFORGE_CLI_PATH + " analyze --chain " + spec.string() +
                    " > " + out.string() + " 2> " + err.string();
  int status = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(status) == 3);  // resource exit code
}

TEST_CASE("plot-data: tidy CSV with the closed-form family columns") {
  fs::path spec = write_spec("fam_plot.json", family_spec({2, 3, 5}, {1, 1, 1}));
  fs::path out = kWorkDir / "plot.csv";
  RunResult r = run_cli("plot-data --spec " + spec.string() + " --mode structural --out " +
                        out.string());
  REQUIRE(r.exit_code == 0);
  std::string csv = slurp(out);
  CHECK(csv.find("n,level,discriminant_order,kernel_order,mode") == 0);
  // n=0, level=3: discriminant order 2*3*5 = 30, kernel p_0^{s_0} = 2
  CHECK(csv.find("0,3,30,2,structural") != std::string::npos);

  // an explicit normal chain plots all-trivial discriminant orders
  fs::path chain = write_spec("plot_chain.json", normal_chain_spec());
  fs::path out2 = kWorkDir / "plot2.csv";
  RunResult r2 = run_cli("plot-data --chain " + chain.string() + " --out " +
                         out2.string());
  REQUIRE(r2.exit_code == 0);
  std::istringstream lines(slurp(out2));
  std::string line;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    auto first = line.find(',');
    auto second = line.find(',', first + 1);
    auto third = line.find(',', second + 1);
    CHECK(line.substr(second + 1, third - second - 1) == "1");
  }
}
