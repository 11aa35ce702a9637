#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli_app.hpp"
#include "oracles.hpp"
#include "qdb/constructions.hpp"

using namespace qdb;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome qdb_run(std::vector<std::string> args) {
  args.insert(args.begin(), "qdb");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::path(QDB_TEST_TMP) / info->name();
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string generate(const std::string& example, std::vector<std::string> extra = {}) {
    const std::string where = path(example.substr(0, example.find(':')) + "_" + std::to_string(counter_++));
    std::vector<std::string> args{"generate", example, "--out", where};
    args.insert(args.end(), extra.begin(), extra.end());
    const Outcome o = qdb_run(args);
    EXPECT_EQ(o.code, 0) << o.err;
    return where;
  }

  std::string write(const std::string& name, const std::string& text) {
    std::ofstream(path(name)) << text;
    return path(name);
  }

  std::string write(const std::string& name, const io::json& j) {
    io::write_file(path(name), j);
    return path(name);
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
  int counter_ = 0;
};

Channel reset_channel(Index d) {
  std::vector<CMatrix> ops;
  for (Index k = 0; k < d; ++k) ops.push_back(oracle::unit(d, 0, k));
  return Channel::from_kraus(ops);
}

}  // namespace

TEST_F(Cli, CycleExampleIsBalanced) {
  const std::string g = generate("cycle3");
  const Outcome o = qdb_run({"check", "etdb", "--channel", g + "/channel.json", "--state", g + "/state.json"});
  EXPECT_EQ(o.code, 0) << o.out << o.err;
  EXPECT_NE(o.out.find("etdb: pass"), std::string::npos);
}

TEST_F(Cli, UnequalCycleWeightsFail) {
  const std::string g = generate("cycle3", {"--weight", "0.7"});
  const Outcome o = qdb_run({"check", "etdb", "--channel", g + "/channel.json", "--state", g + "/state.json"});
  EXPECT_EQ(o.code, 1);
  // loosening the check tolerance flips the verdict, residual unchanged
  const Outcome loose =
      qdb_run({"--tol", "1", "check", "etdb", "--channel", g + "/channel.json", "--state", g + "/state.json"});
  EXPECT_EQ(loose.code, 0);
}

TEST_F(Cli, SingularOutputIsNotEvaluable) {
  const std::string ch = write("reset.json", io::channel_to_json(reset_channel(2)));
  const std::string st = write("state.json", io::state_to_json(maximally_mixed(2)));
  EXPECT_EQ(qdb_run({"check", "sqdb", "--channel", ch, "--state", st}).code, 2);
  EXPECT_EQ(qdb_run({"check", "etdb", "--channel", ch, "--state", st}).code, 1);
  EXPECT_EQ(qdb_run({"dual", "prime", "--channel", ch, "--state", st}).code, 2);
}

TEST_F(Cli, MalformedJsonReportsPosition) {
  const std::string g = generate("cycle3");
  const std::string bad = write("bad.json", std::string("{\n  \"kraus\": [\n    [[1, 0]],\n  }\n"));
  const Outcome o = qdb_run({"check", "etdb", "--channel", bad, "--state", g + "/state.json"});
  EXPECT_EQ(o.code, 3);
  EXPECT_NE(o.err.find(bad + ":4:"), std::string::npos) << o.err;
}

TEST_F(Cli, InputErrors) {
  const std::string g = generate("cycle3");
  const std::string ch = g + "/channel.json", st = g + "/state.json";
  EXPECT_EQ(qdb_run({"check", "etdb", "--channel", ch}).code, 3);
  EXPECT_EQ(qdb_run({"check", "nonsense", "--channel", ch, "--state", st}).code, 3);
  EXPECT_EQ(qdb_run({"--tol", "abc", "check", "etdb", "--channel", ch, "--state", st}).code, 3);
  EXPECT_EQ(qdb_run({"--tol", "-1", "check", "etdb", "--channel", ch, "--state", st}).code, 3);
  EXPECT_EQ(qdb_run({"--tol", "bogus_tol=1", "check", "etdb", "--channel", ch, "--state", st}).code, 3);
  EXPECT_EQ(qdb_run({"check", "etdb", "--channel", path("missing.json"), "--state", st}).code, 3);
  EXPECT_EQ(qdb_run({"generate", "nonsense"}).code, 3);
  EXPECT_EQ(qdb_run({"generate", "shift-clock"}).code, 3);
  EXPECT_EQ(qdb_run({}).code, 3);
  const std::string two = write("two.json", io::state_to_json(maximally_mixed(2)));
  EXPECT_EQ(qdb_run({"check", "etdb", "--channel", ch, "--state", two}).code, 3);
  const std::string notstate = write("notstate.json", io::json{{"rho", {{{1, 0}, {0, 0}}, {{0, 0}, {1, 0}}}}});
  EXPECT_EQ(qdb_run({"check", "etdb", "--channel", ch, "--state", notstate}).code, 3);
}

TEST_F(Cli, NamedToleranceOverride) {
  EXPECT_EQ(cli::tolerances_from({"psd_tol=1e-6"}).psd_tol, 1e-6);
  const ToleranceConfig t = cli::tolerances_from({"1e-3"});
  EXPECT_EQ(t.etdb_tol, 1e-3);
  EXPECT_EQ(t.sqdb_tol, 1e-3);
  EXPECT_EQ(t.inv_tol, 1e-3);
  EXPECT_EQ(t.psd_tol, ToleranceConfig{}.psd_tol);
}

TEST_F(Cli, KmsDualOfUnitalChannelIsAdjoint) {
  Rng rng(301);
  const Channel ch = random_unital_channel(rng, 3);
  const std::string c = write("unital.json", io::channel_to_json(ch));
  const std::string s = write("mixed.json", io::state_to_json(maximally_mixed(3)));
  const Outcome o = qdb_run({"dual", "kms", "--channel", c, "--state", s});
  ASSERT_EQ(o.code, 0) << o.err;
  const Channel dual = io::channel_from_json(io::parse(o.out));
  EXPECT_LE(choi_distance(dual, adjoint(ch)), 1e-12);
}

TEST_F(Cli, AcAndPrimeDualsAgree) {
  Rng rng(302);
  const std::string c = write("channel.json", io::channel_to_json(random_channel(rng, 3)));
  const std::string s = write("state.json", io::state_to_json(DensityMatrix(random_density(rng, 3))));
  const Outcome ac = qdb_run({"dual", "ac", "--channel", c, "--state", s, "--out", path("ac.json")});
  const Outcome prime = qdb_run({"dual", "prime", "--channel", c, "--state", s, "--out", path("prime.json")});
  ASSERT_EQ(ac.code, 0) << ac.err;
  ASSERT_EQ(prime.code, 0) << prime.err;
  const io::json a = io::read_file(path("ac.json")), b = io::read_file(path("prime.json"));
  const Channel ca = io::channel_from_json(a), cb = io::channel_from_json(b);
  EXPECT_LE(choi_distance(ca, cb), 1e-10);
  EXPECT_LE(std::stod(a["self_check"]["state_recovery_residual"].get<std::string>()), 1e-9);
  EXPECT_TRUE(a["self_check"]["trace_preserving"].get<bool>());
}

TEST_F(Cli, TrivialParityDualIsPrime) {
  Rng rng(303);
  const std::string c = write("channel.json", io::channel_to_json(random_channel(rng, 3)));
  const std::string s = write("state.json", io::state_to_json(DensityMatrix(random_density(rng, 3))));
  const std::string p = write("parity.json", io::parity_to_json(ParityOp{CMatrix::Identity(3, 3), false}));
  const Outcome par = qdb_run({"dual", "parity", "--channel", c, "--state", s, "--parity", p});
  const Outcome prime = qdb_run({"dual", "prime", "--channel", c, "--state", s});
  ASSERT_EQ(par.code, 0) << par.err;
  EXPECT_LE(choi_distance(io::channel_from_json(io::parse(par.out)), io::channel_from_json(io::parse(prime.out))),
            1e-10);
}

TEST_F(Cli, RandomGenerationIsDeterministic) {
  const std::string a = generate("random-etdb:3", {"--seed", "7"});
  const std::string b = generate("random-etdb:3", {"--seed", "7"});
  const std::string c = generate("random-etdb:3", {"--seed", "8"});
  EXPECT_EQ(slurp(a + "/channel.json"), slurp(b + "/channel.json"));
  EXPECT_EQ(slurp(a + "/state.json"), slurp(b + "/state.json"));
  EXPECT_NE(slurp(a + "/channel.json"), slurp(c + "/channel.json"));
}

TEST_F(Cli, DepolarizingDecompositionHasFourQuarterItems) {
  const std::string g = generate("depolarizing2");
  const Outcome o = qdb_run(
      {"--format", "json", "decompose", "--channel", g + "/channel.json", "--state", g + "/state.json"});
  ASSERT_EQ(o.code, 0) << o.err;
  const io::json j = io::parse(o.out);
  ASSERT_EQ(j["details"]["items"].size(), 4u);
  for (const auto& it : j["details"]["items"]) EXPECT_NEAR(std::stod(it["p"].get<std::string>()), 0.25, 1e-12);
  EXPECT_TRUE(j["details"]["complete"].get<bool>());
}

TEST_F(Cli, CycleDecompositionLinksPartners) {
  const std::string g = generate("cycle3");
  const Outcome o = qdb_run(
      {"--format", "json", "decompose", "--channel", g + "/channel.json", "--state", g + "/state.json"});
  ASSERT_EQ(o.code, 0) << o.err;
  const io::json j = io::parse(o.out);
  const auto& items = j["details"]["items"];
  ASSERT_EQ(items.size(), 2u);
  EXPECT_EQ(items[0]["reversed_partner_index"], 1);
  EXPECT_EQ(items[1]["reversed_partner_index"], 0);
  EXPECT_EQ(j["details"]["etdb_pairs"].size(), 2u);
}

TEST_F(Cli, ClassicalChainDecompositionIsLabeled) {
  const std::string g = generate("classical-db3");
  const Outcome o = qdb_run({"--format", "json", "decompose", "--chain", g + "/chain.json"});
  ASSERT_EQ(o.code, 0) << o.err;
  const io::json j = io::parse(o.out);
  ASSERT_EQ(j["details"]["items"].size(), 6u);
  for (const auto& it : j["details"]["items"]) {
    ASSERT_TRUE(it["label"].is_array());
    EXPECT_NE(it["label"][0], it["label"][1]);
  }
}

TEST_F(Cli, GeneratedExamplesPassTheirChecks) {
  const auto check = [&](const std::string& g, std::vector<std::string> args) {
    args.insert(args.end(), {"--channel", g + "/channel.json", "--state", g + "/state.json"});
    return qdb_run(args).code;
  };
  const std::string cycle = generate("cycle3");
  EXPECT_EQ(check(cycle, {"check", "etdb"}), 0);
  EXPECT_EQ(check(cycle, {"check", "sqdb"}), 0);
  const std::string dep = generate("depolarizing2");
  EXPECT_EQ(check(dep, {"check", "etdb"}), 0);
  EXPECT_EQ(check(dep, {"check", "sqdb"}), 0);
  const std::string cl = generate("classical-db3");
  EXPECT_EQ(qdb_run({"check", "classical", "--chain", cl + "/chain.json"}).code, 0);
  EXPECT_EQ(check(cl, {"check", "etdb"}), 0);
  const std::string re = generate("random-etdb:3", {"--seed", "11"});
  EXPECT_EQ(check(re, {"check", "etdb"}), 0);
  EXPECT_EQ(check(re, {"check", "sqdb"}), 0);
  for (const char* seed : {"1", "2", "3", "4"}) {
    const std::string rp = generate("random-etdb-p:3", {"--seed", seed});
    EXPECT_EQ(check(rp, {"check", "etdb-p", "--parity", rp + "/parity.json"}), 0) << seed;
    EXPECT_EQ(check(rp, {"check", "sqdb-theta", "--theta", rp + "/theta.json"}), 0) << seed;
  }
  for (const char* m : {"shift-clock:2", "shift-clock:3", "shift-clock:5"}) {
    const std::string sc = generate(m);
    EXPECT_EQ(check(sc, {"check", "etdb-p", "--parity", sc + "/reflection_parity.json"}), 0) << m;
    EXPECT_EQ(check(sc, {"check", "sqdb-theta", "--theta", sc + "/reflection_theta.json"}), 0) << m;
  }
}

TEST_F(Cli, ShiftUnderConjugationFailsForThreeLevels) {
  const std::string sc = generate("shift-clock:3");
  const std::vector<std::string> files{"--channel", sc + "/channel.json", "--state", sc + "/state.json"};
  auto args = std::vector<std::string>{"check", "etdb-p", "--parity", sc + "/parity.json"};
  args.insert(args.end(), files.begin(), files.end());
  EXPECT_EQ(qdb_run(args).code, 1);
  args = {"check", "sqdb-theta", "--theta", sc + "/theta.json"};
  args.insert(args.end(), files.begin(), files.end());
  EXPECT_EQ(qdb_run(args).code, 1);
}

TEST_F(Cli, ThetaNotFixingStateIsNotEvaluable) {
  CMatrix x = CMatrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  CMatrix rho = CMatrix::Zero(2, 2);
  rho(0, 0) = 0.7;
  rho(1, 1) = 0.3;
  const std::string c = write("id.json", io::channel_to_json(identity_channel(2)));
  const std::string s = write("rho.json", io::state_to_json(DensityMatrix(rho)));
  const std::string t = write("theta.json", io::reversing_to_json(ReversingOp{x, false}));
  EXPECT_EQ(qdb_run({"check", "sqdb-theta", "--channel", c, "--state", s, "--theta", t}).code, 2);
  // a parity file is not accepted where a reversing operation is expected
  const std::string p = write("parity.json", io::parity_to_json(ParityOp{x, false}));
  EXPECT_EQ(qdb_run({"check", "sqdb-theta", "--channel", c, "--state", s, "--theta", p}).code, 3);
}

TEST_F(Cli, ClassicalParityCheck) {
  Eigen::MatrixXd tau = Eigen::MatrixXd::Zero(3, 3);
  tau(0, 1) = tau(1, 2) = tau(2, 0) = 1.0;
  const MarkovChain mc(Eigen::VectorXd::Constant(3, 1.0 / 3.0), tau);
  const std::string with_pi = write("cycle.json", io::chain_to_json(mc, Permutation{0, 2, 1}));
  EXPECT_EQ(qdb_run({"check", "classical", "--chain", with_pi}).code, 1);
  EXPECT_EQ(qdb_run({"check", "classical-p", "--chain", with_pi}).code, 0);
  const io::json j = io::read_file(with_pi);
  EXPECT_EQ(j["pi"], io::json::array({1, 3, 2}));
  const std::string bad_pi = write("badpi.json", io::chain_to_json(mc, Permutation{1, 2, 0}));
  EXPECT_EQ(qdb_run({"check", "classical-p", "--chain", bad_pi}).code, 3);
  const Outcome o = qdb_run({"--format", "json", "check", "classical", "--chain", with_pi});
  EXPECT_EQ(io::parse(o.out)["details"]["worst_pair"], io::json::array({1, 2}));
}

TEST_F(Cli, EmbedAndReverse) {
  Eigen::MatrixXd tau = Eigen::MatrixXd::Zero(3, 3);
  tau(0, 1) = tau(1, 2) = tau(2, 0) = 1.0;
  const MarkovChain mc(Eigen::VectorXd::Constant(3, 1.0 / 3.0), tau);
  const std::string c = write("cycle.json", io::chain_to_json(mc));
  const Outcome e = qdb_run({"embed", "--chain", c});
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_LE(choi_distance(io::channel_from_json(io::parse(e.out)), embed(mc)), 1e-15);
  const Outcome r = qdb_run({"reverse", "--chain", c});
  ASSERT_EQ(r.code, 0) << r.err;
  const io::ChainInput back = io::chain_from_json(io::parse(r.out));
  EXPECT_LE((back.chain.tau() - tau.transpose()).norm(), 1e-15);

  Eigen::Matrix2d stuck;
  stuck << 1, 0, 1, 0;
  const std::string z = write("stuck.json", io::chain_to_json(MarkovChain(Eigen::Vector2d(0.5, 0.5), stuck)));
  EXPECT_EQ(qdb_run({"reverse", "--chain", z}).code, 2);
}

TEST_F(Cli, ReportJsonRoundTrip) {
  const std::string g = generate("cycle3", {"--weight", "0.3"});
  const Outcome o = qdb_run(
      {"--format", "json", "check", "sqdb", "--channel", g + "/channel.json", "--state", g + "/state.json"});
  EXPECT_EQ(o.code, 1);
  const io::json j = io::parse(o.out);
  const cli::Report r = cli::report_from_json(j);
  EXPECT_EQ(cli::report_to_json(r), j);
  EXPECT_EQ(cli::report_from_json(cli::report_to_json(r)), r);
  EXPECT_EQ(cli::exit_code(r.verdict), o.code);
  EXPECT_TRUE(j["basis"].is_array());
  EXPECT_EQ(j["summary"]["etdb"], "fail");
  EXPECT_EQ(j["summary"]["invariance"], "pass");
}

TEST_F(Cli, ExitCodeDependsOnVerdictOnly) {
  EXPECT_EQ(cli::exit_code(Verdict::pass), 0);
  EXPECT_EQ(cli::exit_code(Verdict::fail), 1);
  EXPECT_EQ(cli::exit_code(Verdict::not_evaluable), 2);
}

TEST_F(Cli, ExplicitBasisOverride) {
  const std::string g = generate("depolarizing2");
  Rng rng(304);
  const std::string b = write("basis.json", io::basis_to_json(random_unitary(rng, 2)));
  const Outcome o = qdb_run({"--basis", b, "--format", "json", "check", "etdb", "--channel", g + "/channel.json",
                             "--state", g + "/state.json"});
  EXPECT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(io::matrix_from_json(io::parse(o.out)["basis"]), io::basis_from_json(io::read_file(b)));
  const std::string bad = write("bad_basis.json", io::basis_to_json(CMatrix::Ones(2, 2)));
  EXPECT_EQ(qdb_run({"--basis", bad, "check", "etdb", "--channel", g + "/channel.json", "--state",
                     g + "/state.json"})
                .code,
            3);
}
