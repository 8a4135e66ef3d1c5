#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "skein/io.hpp"

using namespace skein;
namespace fs = std::filesystem;

namespace {

const fs::path kSchemas = SKEIN_SCHEMA_DIR;
const fs::path kRoot = kSchemas.parent_path();

struct Run {
  int code = -1;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("skein_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

Run run(const std::string& args, const std::string& env = "") {
  const fs::path errf = scratch("stderr.txt");
  const std::string cmd = env + (env.empty() ? "" : " ") + std::string(SKEIN_CLI_PATH) + " " + args + " 2>" + errf.string();
  Run r;
  FILE* p = ::popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = ::pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(errf);
  return r;
}

bool have_validator() {
  static const bool ok = std::system("python3 -c 'import jsonschema, referencing' >/dev/null 2>&1") == 0;
  return ok;
}

// 0 when the document conforms to the named schema
int validate(const std::string& doc, const std::string& schema) {
  const fs::path f = scratch("doc.json");
  std::ofstream(f) << doc;
  const std::string cmd = "python3 " + (kRoot / "tools" / "check_schema.py").string() + " " + kSchemas.string() + " " + schema + " " + f.string();
  return std::system(cmd.c_str());
}

#define EXPECT_CONFORMS(doc, schema)                                  \
  do {                                                                \
    if (have_validator()) {                                           \
      EXPECT_EQ(validate(doc, schema), 0) << doc;                     \
    }                                                                 \
  } while (0)

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(Cli, BasisListing) {
  auto r = run("basis --genus 2");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ids = lines(r.out);
  ASSERT_EQ(ids.size(), 35u);
  EXPECT_EQ(ids.front(), "trivial:0");
  auto j = run("basis --genus 3 --format json");
  ASSERT_EQ(j.code, 0);
  EXPECT_EQ(Json::parse(j.out).size(), 133u);
  EXPECT_CONFORMS(j.out, "basis.schema.json");
}

TEST(Cli, ReduceNegativeArrow) {
  auto r = run("reduce --genus 2 --expr \"trivial:arrows=-1\"");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "{\"trivial:1\":\"A^-6\"}\n");
  EXPECT_CONFORMS(r.out, "coordinates.schema.json");
  auto t = run("reduce --genus 2 --expr \"trivial:arrows=-1\" --format text");
  EXPECT_EQ(t.out, "trivial:1 = A^-6\n");
}

TEST(Cli, DeriveRelationGolden) {
  auto r = run("derive-relation sphere --n 1 --genus 3");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, slurp(kRoot / "tests" / "golden" / "derive_sphere_n1_g3.txt"));
}

TEST(Cli, ChartFileMatchesBuiltIn) {
  auto file = run("derive-relation --format json --file " + (kRoot / "tests" / "data" / "chart_twist.json").string());
  auto built = run("derive-relation twist --n 2 --format json");
  ASSERT_EQ(file.code, 0) << file.err;
  ASSERT_EQ(built.code, 0) << built.err;
  EXPECT_EQ(Json::parse(file.out)["terms"], Json::parse(built.out)["terms"]);
  EXPECT_CONFORMS(file.out, "relation.schema.json");
  auto torus = run("derive-relation --format json --file " + (kRoot / "tests" / "data" / "chart_torus.json").string());
  ASSERT_EQ(torus.code, 0) << torus.err;
  EXPECT_EQ(Json::parse(torus.out)["max_degree"], 1);
}

TEST(Cli, Deterministic) {
  for (const std::string args : {"verify confluence --genus 2 --n 4 --seed 11", "reduce --genus 3 --expr \"sausage:2:arrows=1;trivial:arrows=3:side=l\" --trace",
                                 "derive-relation torus --n 4 --format json", "normalize-curve --genus 3 --expr fword:011010 --twist beta:2 --eps -1"}) {
    auto a = run(args), b = run(args);
    ASSERT_EQ(a.code, 0) << args << "\n" << a.err;
    EXPECT_EQ(a.out, b.out) << args;
  }
}

TEST(Cli, InputErrorsNameTheField) {
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"basis", "genus"},
      {"reduce --expr trivial", "genus"},
      {"reduce --genus 2", "expr"},
      {"reduce --genus 2 --expr trivial --strategy middle", "strategy"},
      {"reduce --genus 2 --expr trivial --format xml", "format"},
      {"reduce --genus 2 --expr \"delta:1\"", "delta"},
      {"reduce --genus 2 --file /nonexistent.json", "file"},
      {"derive-relation sphere", "n"},
      {"derive-relation two_holed_torus --n 3", "n"},
      {"derive-relation hexagon --n 1", "config"},
      {"verify confluence --genus 2", "seed"},
      {"verify confluence --genus 2 --seed x", "seed"},
      {"verify nothing --genus 2", "check"},
      {"normalize-curve --genus 2 --expr \"a1 b1 a2\"", "expr"},
      {"normalize-curve --genus 2 --expr fword:1000 --twist zeta:1", "twist"},
      {"bogus", ""},
  };
  for (const auto& [args, field] : cases) {
    auto r = run(args);
    EXPECT_EQ(r.code, 1) << args << "\n" << r.err;
    EXPECT_NE(r.err.find(field), std::string::npos) << args << "\n" << r.err;
    EXPECT_TRUE(r.out.empty()) << args;
  }
}

TEST(Cli, IterationCapFromEnvironment) {
  auto r = run("reduce --genus 2 --expr \"trivial:arrows=-9 + alpha:1:arrows=4\"", "SKEIN_ITERATION_CAP=1");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("SKEIN_ITERATION_CAP"), std::string::npos) << r.err;
  auto bad = run("reduce --genus 2 --expr trivial", "SKEIN_ITERATION_CAP=zero");
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("SKEIN_ITERATION_CAP"), std::string::npos) << bad.err;
  EXPECT_EQ(run("reduce --genus 2 --expr trivial", "SKEIN_ITERATION_CAP=50").code, 0);
}

TEST(Cli, VerifyJobs) {
  auto c = run("verify confluence --genus 3 --n 3 --seed 5");
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(Json::parse(c.out)["samples"], 3);
  EXPECT_CONFORMS(c.out, "verify.schema.json");
  auto n = run("verify normalizer --genus 2");
  ASSERT_EQ(n.code, 0) << n.err;
  EXPECT_EQ(Json::parse(n.out)["triples"], 150);
  auto t = run("verify twists --genus 2 --format text");
  EXPECT_EQ(t.out, "twists: ok\n");
}

TEST(Cli, CertificateRoundTrip) {
  auto r = run("normalize-curve --genus 2 --expr fword:1010 --twist gamma:1");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_CONFORMS(r.out, "normalize.schema.json");
  const Json cert = Json::parse(r.out)["certificate"];
  EXPECT_EQ(certificate_to_json(certificate_from_json(cert)), cert);
  const fs::path f = scratch("cert.json");
  std::ofstream(f) << cert.dump();
  auto ok = run("verify certificate --file " + f.string());
  EXPECT_EQ(ok.code, 0) << ok.err;
  EXPECT_CONFORMS(ok.out, "verify.schema.json");

  Json bad = cert;
  bad["end"] = "a1";
  std::ofstream(f) << bad.dump();
  auto no = run("verify certificate --file " + f.string());
  EXPECT_EQ(no.code, 1);
  EXPECT_FALSE(Json::parse(no.out)["ok"].get<bool>());
}

TEST(Cli, CoordinatesRoundTrip) {
  auto r = run("reduce --file " + (kRoot / "tests" / "data" / "expression.json").string());
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_CONFORMS(r.out, "coordinates.schema.json");
  const Json j = Json::parse(r.out);
  ASSERT_TRUE(j.contains("ledger"));
  const auto back = coordinates_from_json(j);
  EXPECT_EQ(coordinates_to_json(back), j);

  auto tr = run("reduce --trace --file " + (kRoot / "tests" / "data" / "expression.json").string());
  EXPECT_CONFORMS(tr.out, "trace.schema.json");
  EXPECT_EQ(Json::parse(tr.out)["coordinates"], j);
}

TEST(Cli, ExpressionRoundTrip) {
  const Json in = Json::parse(slurp(kRoot / "tests" / "data" / "expression.json"));
  EXPECT_CONFORMS(in.dump(), "expression.schema.json");
  const auto e = expression_from_json(in, std::nullopt);
  const Json out = expression_to_json(e.expr, e.genus);
  EXPECT_CONFORMS(out.dump(), "expression.schema.json");
  const auto e2 = expression_from_json(out, std::nullopt);
  EXPECT_EQ(e2.genus, 2);
  EXPECT_EQ(expression_to_json(e2.expr, e2.genus), out);
}

TEST(Cli, ChartRoundTrip) {
  for (const char* name : {"chart_twist.json", "chart_torus.json"}) {
    const Json in = Json::parse(slurp(kRoot / "tests" / "data" / name));
    const Json out = chart_to_json(chart_from_json(in));
    EXPECT_CONFORMS(out.dump(), "chart.schema.json");
    EXPECT_EQ(chart_to_json(chart_from_json(out)), out);
  }
  for (const auto& cfg : {ChartConfig{"sphere", 2}, ChartConfig{"sphere0"}, ChartConfig{"torus", 4}}) {
    const Json out = chart_to_json(config_chart(cfg, true));
    EXPECT_CONFORMS(out.dump(), "chart.schema.json");
    EXPECT_EQ(chart_to_json(chart_from_json(out)), out);
  }
}

TEST(Cli, SchemasRejectMalformedDocuments) {
  if (!have_validator()) GTEST_SKIP() << "python jsonschema not available";
  EXPECT_NE(validate("{\"trivial:1\": 3}", "coordinates.schema.json"), 0);
  EXPECT_NE(validate("{\"nonsep:10:0\": \"1\", \"extra\": \"1\"}", "coordinates.schema.json"), 0);
  EXPECT_NE(validate("{\"genus\": 2}", "expression.schema.json"), 0);
  EXPECT_NE(validate("{\"holes\": [], \"curves\": [{\"points\": [[0, \"x\"]], \"level\": 1}]}", "chart.schema.json"), 0);
}
