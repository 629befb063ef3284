#include "commands.hpp"
#include "diraclab/report.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

using namespace diraclab;
using namespace diraclab::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream s;
  s << is.rdbuf();
  return s.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("diraclab_test_" + name);
  fs::remove_all(d);
  return d;
}

Invocation invocation(const std::string& command, const std::string& out, std::string check = "") {
  Invocation inv{command, std::move(check), {}};
  inv.config.set("out", out);
  return inv;
}

}  // namespace

TEST(RunConfig, ParsesFlatFile) {
  const RunConfig c = parse_config_text("# comment\n  p = 2.5  \nq=10/3 # trailing\n\nvariant = cor1\nseed = 42\n", "test");
  EXPECT_DOUBLE_EQ(c.real("p", 0), 2.5);
  EXPECT_DOUBLE_EQ(c.real("q", 0), 10.0 / 3.0);
  EXPECT_EQ(c.text("variant", ""), "cor1");
  EXPECT_EQ(c.integer("seed", 0), 42);
  EXPECT_EQ(c.integer("threads", 7), 7);
}

TEST(RunConfig, ErrorsNameKeyAndLine) {
  try {
    parse_config_text("p = 2\nbogus = 1\n", "cfg");
    FAIL();
  } catch (const ConfigError& e) {
    const std::string m = e.what();
    EXPECT_NE(m.find("bogus"), std::string::npos);
    EXPECT_NE(m.find("cfg:2"), std::string::npos);
  }
  EXPECT_THROW(parse_config_text("seed = 1.5\n", "cfg"), ConfigError);
  EXPECT_THROW(parse_config_text("p 2\n", "cfg"), ConfigError);
  EXPECT_THROW(parse_real("p", "abc"), ConfigError);
  EXPECT_THROW(parse_real("q", "1/0"), ConfigError);
  EXPECT_TRUE(parse_boolean("x", "true"));
  EXPECT_FALSE(parse_boolean("x", "0"));
  EXPECT_THROW(parse_boolean("x", "maybe"), ConfigError);
  EXPECT_EQ(parse_integer("n", "-12"), -12);
}

TEST(RunConfig, HashIgnoresOutputAndOrder) {
  const RunConfig a = parse_config_text("p = 2\nq = 4\nout = a\n", "a");
  const RunConfig b = parse_config_text("q = 4\np = 2\nout = b\n", "b");
  const RunConfig c = parse_config_text("q = 4\np = 3\n", "c");
  EXPECT_EQ(config_hash("norms", a), config_hash("norms", b));
  EXPECT_NE(config_hash("norms", a), config_hash("norms", c));
  EXPECT_NE(config_hash("norms", a), config_hash("algebra-verify", a));
}

TEST(Validate, RangesQuoteTheAdmissibleSet) {
  auto message = [](Invocation inv) {
    try {
      validate(inv);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  Invocation z{"zero-mode", "theorem3", {}};
  z.config.set("k", "3.5");
  EXPECT_NE(message(z).find("k ∈ [1,10/3)"), std::string::npos);
  EXPECT_NE(message(z).find("'k'"), std::string::npos);
  Invocation t{"zero-mode", "theorem4", {}};
  t.config.set("t", "1.1");
  EXPECT_NE(message(t).find("11/10"), std::string::npos);
  Invocation c{"inequality-check", "", {}};
  c.config.set("variant", "cor1");
  c.config.set("q", "2");
  EXPECT_NE(message(c).find("r ∈ [1, p]"), std::string::npos);
  EXPECT_NE(message({"nope", "", {}}).find("unknown command"), std::string::npos);
  EXPECT_NE(message({"zero-mode", "sideways", {}}).find("unknown zero-mode check"), std::string::npos);
  Invocation b{"extremal-search", "", {}};
  b.config.set("budget", "50");
  EXPECT_NE(message(b).find("budget"), std::string::npos);
  EXPECT_EQ(message({"algebra-verify", "", {}}), "");
}

TEST(Report, NumberFormatting) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_number(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Report, CsvQuoting) {
  CsvTable t;
  t.header = {"a", "b"};
  t.rows = {{"plain", "has,comma"}, {"say \"hi\"", "two\nlines"}};
  EXPECT_EQ(t.str(), "a,b\r\nplain,\"has,comma\"\r\n\"say \"\"hi\"\"\",\"two\nlines\"\r\n");
  t.rows.push_back({"short"});
  EXPECT_THROW(t.str(), std::logic_error);
}

TEST(Report, NonFiniteValuesStayValidJson) {
  NormReport r;
  r.kind = "lorentz_ratio";
  r.value = std::numeric_limits<double>::infinity();
  const std::string s = dump_json(to_json(r));
  EXPECT_NO_THROW(Json::parse(s));
  EXPECT_EQ(Json::parse(s)["value"], "inf");
}

TEST(Report, ScanTableColumns) {
  ScanRecord r;
  r.t = 0.5;
  r.sigma_min = 0.25;
  r.iterations = 3;
  r.converged = true;
  const std::string s = scan_table({r}).str();
  EXPECT_EQ(s.substr(0, s.find("\r\n")), "t,sigma_min,iterations,converged");
}

TEST(Run, AlgebraVerifyWritesManifest) {
  const fs::path dir = fresh_dir("algebra");
  std::ostringstream log;
  EXPECT_EQ(run(invocation("algebra-verify", dir.string()), log), exit_pass);
  const Json manifest = Json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(manifest["command"], "algebra-verify");
  EXPECT_EQ(manifest["code_version"], "0.1.0");
  EXPECT_TRUE(manifest["passed"].get<bool>());
  EXPECT_EQ(manifest["config_hash"].get<std::string>().size(), 16u);
  for (const auto& name : manifest["outputs"]) EXPECT_TRUE(fs::exists(dir / name.get<std::string>())) << name;
  const Json report = Json::parse(slurp(dir / "clifford.json"));
  EXPECT_LE(report["check"]["value"].get<double>(), 1e-13);
}

TEST(Run, ByteIdenticalReports) {
  for (const std::string command : {"norms", "extremal-search"}) {
    std::vector<std::map<std::string, std::string>> runs;
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path dir = fresh_dir(command + std::to_string(rep));
      Invocation inv = invocation(command, dir.string());
      inv.config.set("grid_n", "16");
      inv.config.set("seed", "5");
      if (command == "extremal-search") inv.config.set("budget", "100");
      std::ostringstream log;
      EXPECT_EQ(run(inv, log), exit_pass) << log.str();
      std::map<std::string, std::string> files;
      for (const auto& e : fs::directory_iterator(dir))
        if (e.path().filename() != "run_metadata.json") files[e.path().filename().string()] = slurp(e.path());
      runs.push_back(files);
    }
    EXPECT_EQ(runs[0], runs[1]) << command;
  }
}

TEST(Run, NormsReadsExportedField) {
  const fs::path first = fresh_dir("norms_export");
  std::ostringstream log;
  Invocation a = invocation("norms", first.string());
  a.config.set("grid_n", "16");
  ASSERT_EQ(run(a, log), exit_pass);
  const fs::path second = fresh_dir("norms_read");
  Invocation b = invocation("norms", second.string());
  b.config.set("field", (first / "sample_field.dlsf").string());
  ASSERT_EQ(run(b, log), exit_pass);
  const Json ra = Json::parse(slurp(first / "norms.json")), rb = Json::parse(slurp(second / "norms.json"));
  EXPECT_EQ(ra["reports"], rb["reports"]);
  Invocation c = invocation("norms", fresh_dir("norms_missing").string());
  c.config.set("field", "/nonexistent/field.dlsf");
  EXPECT_THROW(run(c, log), ConfigError);
}
