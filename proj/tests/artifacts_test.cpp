#include "krlab/artifacts.hpp"
#include "krlab/lab.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace krlab {
namespace {

namespace fs = std::filesystem;

BitString bits(const std::string& s) { return BitString::from_bits(s); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

class LabDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("krlab-test-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  LabConfig config(std::size_t delta) const {
    LabConfig c;
    c.delta = delta;
    c.max_len = guaranteed_max_len(build_simple_set(delta));
    c.out_dir = dir_;
    return c;
  }

  fs::path dir_;
};

TEST(Header, FormatAndParse) {
  TableParams p;
  p.max_len = 15;
  p.steps = 77;
  p.delta = 4;
  const std::string line = io::format_header({p, 5});
  EXPECT_EQ(line, "#machine_id=slp3-v1 opcode_width=3 L_max=15 T=77 delta=4 kappa=5");
  const ArtifactHeader h = io::parse_header(line);
  EXPECT_TRUE(io::same_run(h.params, p));
  EXPECT_EQ(h.kappa, 5U);
  EXPECT_THROW(io::parse_header("machine_id=x"), ArtifactError);
  EXPECT_THROW(io::parse_header("#machine_id=slp3-v1 L_max=3"), ArtifactError);
  EXPECT_THROW(io::parse_header("#machine_id=slp3-v1 opcode_width=3 L_max=x T=1 delta=1"), ArtifactError);
}

TEST(IndexFile, RoundTripIsByteStable) {
  const SimpleSet simple = build_simple_set(4);
  TableParams p;
  p.max_len = 12;
  p.delta = 4;
  const HaltingIndex index = build_index(p, conditioning_data(simple));
  std::ostringstream first;
  write_index(first, index);
  std::istringstream in(first.str());
  const HaltingIndex back = read_index(in);
  ASSERT_EQ(back.size(), index.size());
  for (std::size_t i = 0; i < index.size(); i += 7) {
    const auto a = index.record(i);
    const auto b = back.record(i);
    ASSERT_EQ(std::tie(a.p, a.d, a.z, a.r, a.s), std::tie(b.p, b.d, b.z, b.r, b.s));
  }
  std::ostringstream second;
  write_index(second, back);
  EXPECT_EQ(first.str(), second.str());
  EXPECT_EQ(first.str().substr(0, first.str().find('\n')), "#machine_id=slp3-v1 opcode_width=3 L_max=12 T=10000 delta=4");
}

TEST(IndexFile, RejectsTampering) {
  const std::string header = "#machine_id=slp3-v1 opcode_width=3 L_max=6 T=10000 delta=1\n";
  auto read = [](const std::string& text) {
    std::istringstream in(text);
    return read_index(in);
  };
  EXPECT_NO_THROW(read(header + "111\t^\t^\t^\t^\n000111\t^\t0\t0\t^\n"));
  EXPECT_THROW(read(header + "111\t^\t^\t^\t^\n000111\t^\t0\t^\t0\n"), ArtifactError);  // wrong halves
  EXPECT_THROW(read(header + "000111\t^\t0\t^\t0\n111\t^\t^\t^\t^\n"), ArtifactError);  // program order
  EXPECT_THROW(read(header + "111\t0\t^\t^\t^\n111\t^\t^\t^\t^\n"), ArtifactError);    // data order
  EXPECT_THROW(read(header + "111\t^\t^\t^\n"), ArtifactError);                          // field count
  EXPECT_THROW(read(header + "111\t^\t^\t^\t2\n"), ArtifactError);                       // not bits
  EXPECT_THROW(read(""), ArtifactError);
}

TEST(KTableFile, RoundTrip) {
  TableParams p;
  p.max_len = 9;
  const ComplexityTable table = build_k_table(build_index(p, {BitString{}, bits("1")}));
  std::ostringstream out;
  write_ktable(out, table);
  std::istringstream in(out.str());
  const ComplexityTable back = read_ktable(in);
  EXPECT_EQ(back.sorted(), table.sorted());
  std::istringstream bad("#machine_id=slp3-v1 opcode_width=3 L_max=9 T=1 delta=1\n0\t^\t3\t000111\n");
  EXPECT_THROW(read_ktable(bad), ArtifactError);
}

TEST_F(LabDir, DeltaOnePipeline) {
  const LabConfig c = config(1);
  std::ostringstream log;
  const BuildSummary summary = cmd_build(c, log);
  EXPECT_EQ(summary.programs, 1U);
  EXPECT_EQ(summary.records, 1U);
  EXPECT_EQ(log.str(), "programs=1 data=1 records=1 k_entries=1\n");
  EXPECT_EQ(cmd_kappa(c, log).kappa, 1U);
  EXPECT_TRUE(cmd_construct(c, log).family.empty());
  const VerifyResult v = cmd_verify(c, log);
  EXPECT_TRUE(v.ok());
  EXPECT_TRUE(v.report.triples.empty());
  const DefectSurvey survey = cmd_delta_report(c, log);
  EXPECT_EQ(survey.histogram, (std::map<long long, std::size_t>{{-3, 1}}));
  EXPECT_EQ(slurp(dir_ / "wtable.tsv"), "#machine_id=slp3-v1 opcode_width=3 L_max=3 T=10000 delta=1 kappa=1\n");
  EXPECT_EQ(query_kU(c, {}, {}), "3 111");
}

TEST_F(LabDir, SmallPipelineAndQueries) {
  const LabConfig c = config(4);
  std::ostringstream log;
  cmd_build(c, log);
  const KappaBudget budget = cmd_kappa(c, log);
  cmd_construct(c, log);
  const VerifyResult v = cmd_verify(c, log);
  EXPECT_TRUE(v.ok()) << log.str();
  EXPECT_EQ(v.report.triples.size(), 3U * 2U * 3U);
  EXPECT_EQ(query_kU(c, bits("01"), bits("01")), "6 010111");
  EXPECT_EQ(query_kU(c, BitString::from_bits(std::string(30, '1')), {}), "inf");
  for (const auto& t : v.report.triples) {
    const std::string kw = query_kW(c, t.alpha, t.gamma, t.d);
    EXPECT_EQ(kw.substr(0, kw.find(' ')), std::to_string(t.rhs));
  }
  EXPECT_EQ(query_kW(c, bits("0"), {}, bits("1")), query_kU(c, bits("0"), bits("1")));
  EXPECT_GE(budget.kappa, 1U);
}

TEST_F(LabDir, MissingArtifacts) {
  const LabConfig c = config(1);
  std::ostringstream log;
  EXPECT_THROW(cmd_kappa(c, log), ArtifactError);
  EXPECT_THROW(cmd_delta_report(c, log), ArtifactError);
  cmd_build(c, log);
  EXPECT_THROW(cmd_construct(c, log), ArtifactError);  // no kappa.tsv yet
  EXPECT_THROW(cmd_verify(c, log), ArtifactError);
}

TEST_F(LabDir, MismatchedParametersRefused) {
  LabConfig c = config(4);
  std::ostringstream log;
  cmd_build(c, log);
  c.steps = 500;
  EXPECT_THROW(cmd_kappa(c, log), ArtifactError);
  c = config(4);
  c.max_len = 15;
  EXPECT_THROW(cmd_delta_report(c, log), ArtifactError);
}

TEST_F(LabDir, ConfigChecks) {
  LabConfig c = config(8);
  c.max_len = 15;
  std::ostringstream log;
  EXPECT_THROW(cmd_build(c, log), ConfigError);
  c.delta = 0;
  EXPECT_THROW(cmd_build(c, log), ConfigError);
  c = config(8);
  c.machine_id = "other";
  EXPECT_THROW(cmd_build(c, log), ConfigError);
}

TEST_F(LabDir, PartialBudgetsSurfaceInfiniteComplexity) {
  LabConfig c = config(8);
  c.max_len = 6;
  c.allow_partial = true;
  std::ostringstream log;
  cmd_build(c, log);
  EXPECT_THROW(cmd_kappa(c, log), InfiniteComplexity);
}

TEST_F(LabDir, TamperedWTableFailsVerification) {
  const LabConfig c = config(4);
  std::ostringstream log;
  cmd_build(c, log);
  cmd_kappa(c, log);
  cmd_construct(c, log);
  ASSERT_TRUE(cmd_verify(c, log).ok());

  // Lengthen the codeword on the last row by one bit.
  std::string text = slurp(dir_ / "wtable.tsv");
  ASSERT_EQ(text.back(), '\n');
  const auto row_start = text.rfind('\n', text.size() - 2) + 1;
  auto fields = io::split(std::string_view(text).substr(row_start, text.size() - row_start - 1));
  ASSERT_EQ(fields.size(), 5U);
  std::string row = std::string(fields[0]) + '\t' + std::string(fields[1]) + '\t' + std::string(fields[2]) + "0\t" +
                    std::string(fields[3]) + '\t' + std::string(fields[4]) + '\n';
  text = text.substr(0, row_start) + row;
  std::ofstream(dir_ / "wtable.tsv", std::ios::binary) << text;

  std::ostringstream vlog;
  const VerifyResult v = cmd_verify(c, vlog);
  EXPECT_FALSE(v.ok());
  EXPECT_FALSE(v.audit_problems.empty());
  EXPECT_NE(vlog.str().find("wtable:"), std::string::npos);
}

TEST_F(LabDir, RebuildIsByteIdentical) {
  const LabConfig c = config(4);
  std::ostringstream log;
  cmd_build(c, log);
  const std::string index = slurp(dir_ / "index.tsv");
  const std::string ktable = slurp(dir_ / "ktable.tsv");
  cmd_build(c, log);
  EXPECT_EQ(slurp(dir_ / "index.tsv"), index);
  EXPECT_EQ(slurp(dir_ / "ktable.tsv"), ktable);
}

}  // namespace
}  // namespace krlab
