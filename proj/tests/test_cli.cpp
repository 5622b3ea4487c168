#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"

using namespace kbpair;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kData = KBPAIR_DATA_DIR;

}  // namespace

TEST(Cli, BracketT821) {
  const Result r = run({"bracket", "(((1/2)+1)*2)+(-3)"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out,
            "f = -2t^-6 + 2t^-2 - 2t^2 + t^6\n"
            "g = -2t^-4 + 3 - 4t^4 + 3t^8 - 2t^12 + t^16\n");
}

TEST(Cli, BracketModular) {
  EXPECT_EQ(run({"bracket", "T20", "--mod", "2"}).out, "modulus = 2\nf = 1\ng = 0\n");
  EXPECT_EQ(run({"bracket", "M4", "--mod", "16"}).out, "modulus = 16\nf = 1\ng = 0\n");
  EXPECT_EQ(run({"bracket", "M30", "--mod", "1073741824"}).code, 0);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"bracket", "1 +"}).code, 2);
  EXPECT_EQ(run({"bracket", "1", "--mod", "1"}).code, 2);
  EXPECT_EQ(run({"bracket", "1", "--mod", "x"}).code, 2);
  EXPECT_EQ(run({"bracket", "M12"}).code, 3);
  EXPECT_EQ(run({"jones", "sideways", "1"}).code, 2);
  EXPECT_EQ(run({"jones", "den", "1 * M12"}).code, 3);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"--output", "xml", "bracket", "1"}).code, 2);
  EXPECT_EQ(run({"census", kData + "/missing.txt", "--mod", "2"}).code, 2);
}

TEST(Cli, JonesUnknot) {
  const Result r = run({"jones", "den", "0"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("V = 1\n"), std::string::npos) << r.out;
}

TEST(Cli, JonesK1ModTwo) {
  const Result r = run({"jones", "den", "1 * M1", "--mod", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("V ≡ 1 (mod 2): true\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("writhe = 1\n"), std::string::npos) << r.out;
}

TEST(Cli, JonesLargeNeedsModulus) {
  const Result r = run({"jones", "den", "1 * M14", "--mod", "16384"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("evaluation = modulo 16384"), std::string::npos);
  EXPECT_NE(r.out.find("V ≡ 1 (mod 16384): true"), std::string::npos);
}

TEST(Cli, JonesT821MatchesPdPath) {
  const Result algebra = run({"jones", "num", "T821"});
  ASSERT_EQ(algebra.code, 0);
  const std::string path = ::testing::TempDir() + "t821.pd";
  {
    const Result pd = run({"pd", "num", "T821"});
    ASSERT_EQ(pd.code, 0);
    std::ofstream(path) << pd.out;
  }
  const Result via_pd = run({"jones-pd", path});
  ASSERT_EQ(via_pd.code, 0);
  auto line = [](const std::string& text, const std::string& key) {
    const auto at = text.find(key + " = ");
    return text.substr(at, text.find('\n', at) - at);
  };
  EXPECT_EQ(line(algebra.out, "V"), line(via_pd.out, "V"));
  EXPECT_EQ(line(algebra.out, "writhe"), line(via_pd.out, "writhe"));
}

TEST(Cli, MultiComponentWarning) {
  const Result r = run({"jones", "num", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  EXPECT_NE(r.out.find("components = 2"), std::string::npos);
}

TEST(Cli, Oracle) {
  const Result r = run({"oracle", "T821"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("states = 256\n"), std::string::npos);
  EXPECT_NE(r.out.find("verdict = equal\n"), std::string::npos);
  const Result over = run({"oracle", "M2"});
  EXPECT_EQ(over.code, 3);
  EXPECT_NE(over.err.find("40 crossings exceeds cap 24"), std::string::npos);
  EXPECT_EQ(run({"oracle", "M2", "--cap", "0"}).code, 2);
}

TEST(Cli, CapFromEnvironmentFlagsWin) {
  ::setenv(cli::kCapEnv, "4", 1);
  EXPECT_EQ(run({"oracle", "T821"}).code, 3);
  EXPECT_EQ(run({"oracle", "T821", "--cap", "8"}).code, 0);
  ::setenv(cli::kCapEnv, "lots", 1);
  EXPECT_EQ(run({"oracle", "1"}).code, 2);
  ::unsetenv(cli::kCapEnv);
}

TEST(Cli, Census) {
  const Result r = run({"census", kData + "/census_small.txt", "--mod", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out,
            "2 records\nmodulus = 2\nmatching = 1\n"
            "crossings 0: 1 of 1 with V ≡ 1 (mod 2)\n"
            "crossings 3: 0 of 1 with V ≡ 1 (mod 2)\n");
  const Result empty = run({"census", kData + "/census_empty.txt", "--mod", "2"});
  EXPECT_EQ(empty.code, 0);
  EXPECT_EQ(empty.out.substr(0, 10), "0 records\n");
  EXPECT_EQ(run({"census", kData + "/census_small.txt"}).code, 2);

  const std::string bad = ::testing::TempDir() + "bad_census.txt";
  std::ofstream(bad) << "PD[Loop[1]]\nPD[X[1,2,3,4]]\n";
  const Result fail = run({"census", bad, "--mod", "2"});
  EXPECT_EQ(fail.code, 2);
  EXPECT_NE(fail.err.find("record 2"), std::string::npos) << fail.err;
  EXPECT_TRUE(fail.out.empty());
}

TEST(Cli, JsonMirrorsText) {
  const std::vector<std::vector<std::string>> commands = {
      {"bracket", "T821"},
      {"bracket", "T20", "--mod", "2"},
      {"jones", "den", "1 * M1", "--mod", "4"},
      {"oracle", "2 * 3"},
      {"jones-pd", KBPAIR_DATA_DIR "/trefoil.pd", "--mod", "3"},
  };
  for (const auto& cmd : commands) {
    const Result text = run(cmd);
    std::vector<std::string> json_cmd = {"--output", "json"};
    json_cmd.insert(json_cmd.end(), cmd.begin(), cmd.end());
    const Result json = run(json_cmd);
    ASSERT_EQ(text.code, json.code);
    const auto doc = nlohmann::ordered_json::parse(json.out);
    std::istringstream lines(text.out);
    std::string line;
    auto it = doc.begin();
    for (; std::getline(lines, line); ++it) {
      ASSERT_NE(it, doc.end()) << line;
      const std::string value = it->is_string() ? it->get<std::string>() : it->dump();
      EXPECT_TRUE(line.size() >= value.size() &&
                  line.compare(line.size() - value.size(), value.size(), value) == 0)
          << line << " vs " << value;
    }
    EXPECT_EQ(it, doc.end());
  }
}

TEST(Cli, VerifyClaims) {
  const Result a = run({"verify-paper"});
  EXPECT_EQ(a.code, 0) << a.out;
  EXPECT_EQ(a.out.find("FAIL"), std::string::npos);
  EXPECT_EQ(a.out, run({"verify-paper"}).out);
  const Result small = run({"verify-paper", "--max-r", "2"});
  EXPECT_EQ(small.code, 0);
  EXPECT_NE(small.out.find("K2-jones"), std::string::npos);
  EXPECT_EQ(small.out.find("K3-jones"), std::string::npos);
  const Result json = run({"--output", "json", "verify-paper", "--max-r", "2"});
  const auto doc = nlohmann::json::parse(json.out);
  EXPECT_EQ(doc["passed"], doc["total"]);
  std::set<std::string> ids;
  for (const auto& c : doc["claims"]) EXPECT_TRUE(ids.insert(c["id"].get<std::string>()).second);
}

TEST(Cli, VerifyFaultInjection) {
  VerifyOptions opt;
  opt.max_r = 2;
  opt.generator = [](int sign) {
    BracketPair p = generator(sign);
    p.g = p.g + LaurentPoly::t(5);
    return p;
  };
  const VerificationReport rep = verify_claims(opt);
  std::ostringstream out;
  EXPECT_EQ(cli::emit_verification(rep, false, out), 1);
  bool t821_failed = false;
  for (const auto& c : rep.claims)
    if (c.id == "T821-pair") t821_failed = !c.pass;
  EXPECT_TRUE(t821_failed);
  EXPECT_NE(out.str().find("FAIL T821-pair"), std::string::npos);
}

TEST(Cli, PdCommand) {
  const Result r = run({"pd", "den", "1 * M1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 21);
}
