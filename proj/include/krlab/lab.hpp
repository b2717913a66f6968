#pragma once

// The build -> kappa -> construct -> verify -> report pipeline over files in one
// output directory. Each step checks the headers of the artifacts it reads.

#include "krlab/artifacts.hpp"
#include "krlab/chaitin.hpp"
#include "krlab/complexity_table.hpp"
#include "krlab/halting_index.hpp"
#include "krlab/simple_set.hpp"
#include "krlab/theorem.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace krlab {

enum class ExitCode : int {
  Ok = 0,
  VerificationFailed = 1,
  Usage = 2,
  Budget = 3,
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LabConfig {
  std::size_t delta = 8;
  std::size_t max_len = 21;
  std::uint64_t steps = 10'000;
  std::filesystem::path out_dir = "lab-out";
  std::string machine_id = "slp3-v1";
  bool allow_partial = false;

  TableParams params() const {
    TableParams p;
    p.machine.machine_id = machine_id;
    p.machine.step_budget_default = steps;
    p.max_len = max_len;
    p.steps = steps;
    p.delta = delta;
    return p;
  }
};

inline constexpr std::string_view kIndexFile = "index.tsv";
inline constexpr std::string_view kKTableFile = "ktable.tsv";
inline constexpr std::string_view kKappaFile = "kappa.tsv";
inline constexpr std::string_view kWTableFile = "wtable.tsv";
inline constexpr std::string_view kTheoremFile = "theorem.tsv";
inline constexpr std::string_view kSurveyFile = "delta_survey.tsv";

/// Checks the configuration and returns its simple set.
inline SimpleSet checked_simple_set(const LabConfig& config) {
  if (config.delta < 1) throw ConfigError("--delta must be at least 1");
  if (config.max_len < kOpcodeWidth) throw ConfigError("--max-len must be at least 3");
  if (config.machine_id != MachineSpec{}.machine_id) throw ConfigError("unknown machine '" + config.machine_id + "'");
  SimpleSet simple = build_simple_set(config.delta);
  const std::size_t needed = guaranteed_max_len(simple);
  if (config.max_len < needed && !config.allow_partial) {
    throw ConfigError("--max-len " + std::to_string(config.max_len) + " is below " + std::to_string(needed) +
                      ", the bound that keeps every needed complexity finite at delta " +
                      std::to_string(config.delta) + " (pass --allow-partial to override)");
  }
  return simple;
}

namespace detail {

inline std::filesystem::path artifact(const LabConfig& config, std::string_view name) { return config.out_dir / name; }

inline std::ifstream open_in(const LabConfig& config, std::string_view name) {
  std::ifstream in(artifact(config, name), std::ios::binary);
  if (!in) throw ArtifactError("cannot read " + artifact(config, name).string() + "; run the earlier pipeline steps first");
  return in;
}

// Writes through a temporary file so a failed step never leaves a truncated artifact.
template <class Writer>
void write_artifact(const LabConfig& config, std::string_view name, Writer&& writer) {
  const auto target = artifact(config, name);
  auto tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ArtifactError("cannot write " + tmp.string());
    writer(out);
    out.flush();
    if (!out) throw ArtifactError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) throw ArtifactError("cannot move " + tmp.string() + " into place: " + ec.message());
}

inline HaltingIndex load_index(const LabConfig& config) {
  auto in = open_in(config, kIndexFile);
  HaltingIndex index = read_index(in);
  if (!io::same_run(index.params(), config.params())) {
    throw ArtifactError("index.tsv does not match the requested configuration (" +
                        io::format_header({index.params(), std::nullopt}) + ")");
  }
  return index;
}

inline std::shared_ptr<const ComplexityTable> load_ktable(const LabConfig& config) {
  auto in = open_in(config, kKTableFile);
  auto table = std::make_shared<const ComplexityTable>(read_ktable(in));
  io::require_params({table->params(), std::nullopt}, config.params(), kKTableFile);
  return table;
}

inline KappaBudget load_kappa(const LabConfig& config) {
  auto in = open_in(config, kKappaFile);
  auto [header, budget] = read_kappa(in);
  io::require_params(header, config.params(), kKappaFile);
  return budget;
}

inline WComputer load_w(const LabConfig& config, const SimpleSet& simple, std::shared_ptr<const ComplexityTable> base) {
  auto in = open_in(config, kWTableFile);
  WComputer w = read_wtable(in, simple, std::move(base));
  io::require_params({w.params, w.kappa}, config.params(), kWTableFile);
  return w;
}

}  // namespace detail

struct BuildSummary {
  std::size_t programs = 0;
  std::size_t data = 0;
  std::size_t records = 0;
  std::size_t k_entries = 0;
};

inline BuildSummary cmd_build(const LabConfig& config, std::ostream& log) {
  const SimpleSet simple = checked_simple_set(config);
  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  if (ec) throw ArtifactError("cannot create " + config.out_dir.string() + ": " + ec.message());

  const HaltingIndex index = build_index(config.params(), conditioning_data(simple));
  const ComplexityTable ktable = build_k_table(index);
  detail::write_artifact(config, kIndexFile, [&](std::ostream& os) { write_index(os, index); });
  detail::write_artifact(config, kKTableFile, [&](std::ostream& os) { write_ktable(os, ktable); });

  BuildSummary summary{index.programs().size(), index.data().size(), index.size(), ktable.size()};
  log << "programs=" << summary.programs << " data=" << summary.data << " records=" << summary.records
      << " k_entries=" << summary.k_entries << '\n';
  return summary;
}

inline KappaBudget cmd_kappa(const LabConfig& config, std::ostream& log) {
  const SimpleSet simple = checked_simple_set(config);
  const HaltingIndex index = detail::load_index(config);
  const auto ktable = detail::load_ktable(config);
  KappaBudget budget = minimal_kappa(index, *ktable, simple);
  detail::write_artifact(config, kKappaFile, [&](std::ostream& os) { write_kappa(os, config.params(), budget); });
  log << "kappa=" << budget.kappa << " pairs=" << budget.per_pair.size() << '\n';
  return budget;
}

inline WComputer cmd_construct(const LabConfig& config, std::ostream& log) {
  const SimpleSet simple = checked_simple_set(config);
  const KappaBudget budget = detail::load_kappa(config);
  const HaltingIndex index = detail::load_index(config);
  const auto ktable = detail::load_ktable(config);
  WComputer w = build_W(index, ktable, simple, budget.kappa);
  detail::write_artifact(config, kWTableFile, [&](std::ostream& os) { write_wtable(os, w); });
  std::size_t rows = 0;
  for (const auto& [s, table] : w.family) rows += table.rows().size();
  log << "kappa=" << w.kappa << " computers=" << w.family.size() << " rows=" << rows << '\n';
  return w;
}

struct VerifyResult {
  TheoremReport report;
  std::vector<std::string> audit_problems;

  bool ok() const { return report.all_exact && audit_problems.empty(); }
};

inline VerifyResult cmd_verify(const LabConfig& config, std::ostream& log) {
  const SimpleSet simple = checked_simple_set(config);
  const KappaBudget budget = detail::load_kappa(config);
  const auto ktable = detail::load_ktable(config);
  const WComputer w = detail::load_w(config, simple, ktable);
  if (w.kappa != budget.kappa) {
    throw ArtifactError("wtable.tsv kappa=" + std::to_string(w.kappa) + " differs from kappa.tsv kappa=" +
                        std::to_string(budget.kappa));
  }
  VerifyResult result{verify_theorem(w, *ktable, simple, w.kappa), audit_W(w, *ktable)};
  detail::write_artifact(config, kTheoremFile, [&](std::ostream& os) { write_theorem(os, result.report); });

  log << "triples=" << result.report.triples.size() << " all_exact=" << (result.report.all_exact ? "true" : "false")
      << " kappa=" << w.kappa << '\n';
  for (const auto& t : result.report.triples) {
    if (t.residual != 0) {
      log << "first failing triple: alpha=" << t.alpha.to_string() << " gamma=" << t.gamma.to_string()
          << " d=" << t.d.to_string() << " lhs=" << t.lhs << " rhs=" << t.rhs << " residual=" << t.residual << '\n';
      break;
    }
  }
  for (const auto& p : result.audit_problems) log << "wtable: " << p << '\n';
  return result;
}

inline DefectSurvey cmd_delta_report(const LabConfig& config, std::ostream& log) {
  const SimpleSet simple = checked_simple_set(config);
  const auto ktable = detail::load_ktable(config);
  DefectSurvey survey = defect_survey(*ktable, simple);
  detail::write_artifact(config, kSurveyFile, [&](std::ostream& os) { write_survey(os, survey); });
  log << "finite_triples=" << survey.finite_triples;
  if (survey.min && survey.max) log << " min=" << survey.min->delta_value << " max=" << survey.max->delta_value;
  log << '\n';
  return survey;
}

/// K_U(x | d) with its witness, printed as "k witness" or "inf".
inline std::string query_kU(const LabConfig& config, const BitString& x, const BitString& d) {
  const auto ktable = detail::load_ktable(config);
  if (const KEntry* e = ktable->find(x, d)) return std::to_string(e->k) + " " + e->witness.to_string();
  return "inf";
}

/// K_W(alpha | <gamma, d>) with the shortest W program, printed as "k program" or "inf".
inline std::string query_kW(const LabConfig& config, const BitString& alpha, const BitString& gamma,
                            const BitString& d) {
  const SimpleSet simple = checked_simple_set(config);
  const auto ktable = detail::load_ktable(config);
  if (gamma.empty()) {
    if (const KEntry* e = ktable->find(alpha, d)) return std::to_string(e->k) + " " + e->witness.to_string();
    return "inf";
  }
  const WComputer w = detail::load_w(config, simple, ktable);
  auto it = w.family.find(gamma);
  if (it == w.family.end()) return "inf";
  if (const auto* row = it->second.shortest_row(alpha, d)) {
    return std::to_string(row->codeword.size()) + " " + row->codeword.to_string();
  }
  return "inf";
}

}  // namespace krlab
