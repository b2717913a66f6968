#pragma once

// Tab-separated artifact files. Each starts with a '#key=value ...' header naming the
// machine and budgets; Λ is written "^". Writers sort rows canonically, so rebuilding
// from the same parameters reproduces the same bytes.

#include "krlab/bitstring.hpp"
#include "krlab/chaitin.hpp"
#include "krlab/complexity_table.hpp"
#include "krlab/halting_index.hpp"
#include "krlab/theorem.hpp"

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace krlab {

class ArtifactError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ArtifactHeader {
  TableParams params;
  std::optional<std::size_t> kappa;
};

namespace io {

inline std::vector<std::string_view> split(std::string_view line, char sep = '\t') {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class N>
N parse_number(std::string_view text, std::string_view what) {
  N value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) throw ArtifactError("bad " + std::string(what) + ": '" + std::string(text) + "'");
  return value;
}

inline std::string format_header(const ArtifactHeader& h) {
  std::ostringstream os;
  os << "#machine_id=" << h.params.machine.machine_id << " opcode_width=" << h.params.machine.opcode_width
     << " L_max=" << h.params.max_len << " T=" << h.params.steps << " delta=" << h.params.delta;
  if (h.kappa) os << " kappa=" << *h.kappa;
  return os.str();
}

inline ArtifactHeader parse_header(std::string_view line) {
  if (line.empty() || line.front() != '#') throw ArtifactError("missing '#' header line");
  std::map<std::string, std::string, std::less<>> fields;
  for (auto item : split(line.substr(1), ' ')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ArtifactError("malformed header field '" + std::string(item) + "'");
    fields.emplace(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
  }
  auto need = [&](std::string_view key) -> const std::string& {
    auto it = fields.find(key);
    if (it == fields.end()) throw ArtifactError("header lacks " + std::string(key));
    return it->second;
  };
  ArtifactHeader h;
  h.params.machine.machine_id = need("machine_id");
  h.params.machine.opcode_width = parse_number<std::size_t>(need("opcode_width"), "opcode_width");
  h.params.max_len = parse_number<std::size_t>(need("L_max"), "L_max");
  h.params.steps = parse_number<std::uint64_t>(need("T"), "T");
  h.params.delta = parse_number<std::size_t>(need("delta"), "delta");
  if (auto it = fields.find("kappa"); it != fields.end()) h.kappa = parse_number<std::size_t>(it->second, "kappa");
  return h;
}

// Machine and budget fields only; step_budget_default is not persisted.
inline bool same_run(const TableParams& a, const TableParams& b) {
  return a.machine.machine_id == b.machine.machine_id && a.machine.opcode_width == b.machine.opcode_width &&
         a.max_len == b.max_len && a.steps == b.steps && a.delta == b.delta;
}

inline void require_params(const ArtifactHeader& h, const TableParams& expected, std::string_view file) {
  if (!same_run(h.params, expected)) {
    throw ArtifactError(std::string(file) + " was built with different parameters (" + format_header(h) +
                        "), expected " + format_header({expected, std::nullopt}));
  }
}

inline BitString field_bits(std::string_view token, std::string_view file, std::size_t line_no) {
  try {
    return BitString::parse(token);
  } catch (const MalformedBits& e) {
    throw ArtifactError(std::string(file) + ":" + std::to_string(line_no) + ": " + e.what());
  }
}

inline std::vector<std::string_view> row_fields(std::string_view line, std::size_t expected, std::string_view file,
                                                std::size_t line_no) {
  auto f = split(line);
  if (f.size() != expected) {
    throw ArtifactError(std::string(file) + ":" + std::to_string(line_no) + ": expected " + std::to_string(expected) +
                        " fields, found " + std::to_string(f.size()));
  }
  return f;
}

}  // namespace io

// ---------------------------------------------------------------------------
// Halting index: p d z r s

inline void write_index(std::ostream& os, const HaltingIndex& index) {
  os << io::format_header({index.params(), std::nullopt}) << '\n';
  for (const auto& e : index.entries()) {
    const auto& o = index.outputs()[e.output];
    os << index.programs()[e.program].to_string() << '\t' << index.data()[e.data].to_string() << '\t'
       << o.z.to_string() << '\t' << o.r.to_string() << '\t' << o.s.to_string() << '\n';
  }
}

/// Reads an index file, checking canonical row order and that (r, s) = unpair(z).
inline HaltingIndex read_index(std::istream& is) {
  constexpr std::string_view file = "index.tsv";
  std::string line;
  if (!std::getline(is, line)) throw ArtifactError("index.tsv is empty");
  const ArtifactHeader header = io::parse_header(line);

  struct Raw {
    std::uint32_t program, data, output;
  };
  std::vector<BitString> programs;
  std::vector<BitString> data;
  std::unordered_map<BitString, std::uint32_t> data_ids;
  std::vector<BitString> outputs;
  std::vector<std::pair<BitString, BitString>> halves;
  std::unordered_map<BitString, std::uint32_t> output_ids;
  std::vector<Raw> raw;

  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto f = io::row_fields(line, 5, file, line_no);
    BitString p = io::field_bits(f[0], file, line_no);
    if (programs.empty() || programs.back() != p) {
      if (!programs.empty() && !(programs.back() < p)) {
        throw ArtifactError("index.tsv:" + std::to_string(line_no) + ": programs out of canonical order");
      }
      programs.push_back(std::move(p));
    }
    BitString d = io::field_bits(f[1], file, line_no);
    auto [dit, dnew] = data_ids.try_emplace(d, static_cast<std::uint32_t>(data.size()));
    if (dnew) data.push_back(std::move(d));
    BitString z = io::field_bits(f[2], file, line_no);
    auto [zit, znew] = output_ids.try_emplace(z, static_cast<std::uint32_t>(outputs.size()));
    if (znew) {
      outputs.push_back(std::move(z));
      halves.emplace_back(io::field_bits(f[3], file, line_no), io::field_bits(f[4], file, line_no));
    }
    raw.push_back({static_cast<std::uint32_t>(programs.size() - 1), dit->second, zit->second});
  }

  // Data ids in the index follow canonical data order.
  std::vector<std::uint32_t> order(data.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return data[a] < data[b]; });
  std::vector<std::uint32_t> remap(data.size());
  std::vector<BitString> sorted_data;
  sorted_data.reserve(data.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) {
    remap[order[i]] = i;
    sorted_data.push_back(data[order[i]]);
  }

  HaltingIndex index(header.params, std::move(programs), std::move(sorted_data));
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const std::uint32_t d = remap[raw[i].data];
    if (i > 0 && raw[i - 1].program == raw[i].program && remap[raw[i - 1].data] >= d) {
      throw ArtifactError("index.tsv: data out of canonical order for program " +
                          index.programs()[raw[i].program].to_string());
    }
    index.add(raw[i].program, d, outputs[raw[i].output]);
  }
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    const auto id = *index.output_id(outputs[i]);
    const auto& o = index.outputs()[id];
    if (o.r != halves[i].first || o.s != halves[i].second) {
      throw ArtifactError("index.tsv: (r, s) does not unpair output " + outputs[i].to_string());
    }
  }
  return index;
}

// ---------------------------------------------------------------------------
// K table: x d k witness

inline void write_ktable(std::ostream& os, const ComplexityTable& table) {
  os << io::format_header({table.params(), std::nullopt}) << '\n';
  for (const auto& [key, entry] : table.sorted()) {
    os << key.first.to_string() << '\t' << key.second.to_string() << '\t' << entry.k << '\t'
       << entry.witness.to_string() << '\n';
  }
}

inline ComplexityTable read_ktable(std::istream& is) {
  constexpr std::string_view file = "ktable.tsv";
  std::string line;
  if (!std::getline(is, line)) throw ArtifactError("ktable.tsv is empty");
  ComplexityTable table(io::parse_header(line).params);
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto f = io::row_fields(line, 4, file, line_no);
    KEntry entry{io::parse_number<std::size_t>(f[2], "k"), io::field_bits(f[3], file, line_no)};
    if (entry.witness.size() != entry.k) {
      throw ArtifactError("ktable.tsv:" + std::to_string(line_no) + ": witness length differs from k");
    }
    if (!table.insert(io::field_bits(f[0], file, line_no), io::field_bits(f[1], file, line_no), std::move(entry))) {
      throw ArtifactError("ktable.tsv:" + std::to_string(line_no) + ": duplicate (x, d)");
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// Kappa report: s d kappa_min, with the maximum in the header

inline void write_kappa(std::ostream& os, const TableParams& params, const KappaBudget& budget) {
  os << io::format_header({params, budget.kappa}) << '\n';
  for (const auto& [key, value] : budget.per_pair) {
    os << key.first.to_string() << '\t' << key.second.to_string() << '\t' << value << '\n';
  }
}

inline std::pair<ArtifactHeader, KappaBudget> read_kappa(std::istream& is) {
  constexpr std::string_view file = "kappa.tsv";
  std::string line;
  if (!std::getline(is, line)) throw ArtifactError("kappa.tsv is empty");
  ArtifactHeader header = io::parse_header(line);
  if (!header.kappa) throw ArtifactError("kappa.tsv header lacks kappa");
  KappaBudget budget;
  budget.kappa = *header.kappa;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto f = io::row_fields(line, 3, file, line_no);
    budget.per_pair.emplace(InnerDataKey{io::field_bits(f[0], file, line_no), io::field_bits(f[1], file, line_no)},
                            io::parse_number<std::size_t>(f[2], "kappa_min"));
  }
  return {std::move(header), std::move(budget)};
}

// ---------------------------------------------------------------------------
// W table: s d codeword r source_program

inline void write_wtable(std::ostream& os, const WComputer& w) {
  os << io::format_header({w.params, w.kappa}) << '\n';
  for (const auto& [s, table] : w.family) {
    auto rows = table.rows();
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
      if (a.d != b.d) return a.d < b.d;
      return a.codeword < b.codeword;
    });
    for (const auto& r : rows) {
      os << s.to_string() << '\t' << r.d.to_string() << '\t' << r.codeword.to_string() << '\t' << r.result.to_string()
         << '\t' << r.source_program.to_string() << '\n';
    }
  }
}

/// Rebuilds the dispatcher from a W table. Every s in S \ {Λ} gets a (possibly empty) W_s.
inline WComputer read_wtable(std::istream& is, const SimpleSet& simple, std::shared_ptr<const ComplexityTable> base) {
  constexpr std::string_view file = "wtable.tsv";
  std::string line;
  if (!std::getline(is, line)) throw ArtifactError("wtable.tsv is empty");
  const ArtifactHeader header = io::parse_header(line);
  if (!header.kappa) throw ArtifactError("wtable.tsv header lacks kappa");
  WComputer w{header.params, simple, *header.kappa, {}, std::move(base)};
  for (const auto& s : simple.members) {
    if (!s.empty()) w.family.emplace(s, RestrictedComputerTable(s));
  }
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto f = io::row_fields(line, 5, file, line_no);
    const BitString s = io::field_bits(f[0], file, line_no);
    auto it = w.family.find(s);
    if (it == w.family.end()) {
      throw ArtifactError("wtable.tsv:" + std::to_string(line_no) + ": no restricted computer for s=" + s.to_string());
    }
    it->second.add({io::field_bits(f[1], file, line_no), io::field_bits(f[2], file, line_no),
                    io::field_bits(f[3], file, line_no), io::field_bits(f[4], file, line_no)});
  }
  return w;
}

// ---------------------------------------------------------------------------
// Reports

inline void write_theorem(std::ostream& os, const TheoremReport& report) {
  os << io::format_header({report.params, report.kappa}) << '\n';
  os << "#triples=" << report.triples.size() << " all_exact=" << (report.all_exact ? 1 : 0) << '\n';
  for (const auto& t : report.triples) {
    os << t.alpha.to_string() << '\t' << t.gamma.to_string() << '\t' << t.d.to_string() << '\t' << t.lhs << '\t'
       << t.rhs << '\t' << t.residual << '\n';
  }
}

inline void write_survey(std::ostream& os, const DefectSurvey& survey) {
  os << io::format_header({survey.params, std::nullopt}) << '\n';
  os << "#finite_triples=" << survey.finite_triples << " infinite_triples=" << survey.infinite_triples << '\n';
  auto extreme = [&](std::string_view name, const std::optional<ChainDefect>& c) {
    if (!c) return;
    os << "#" << name << " delta_value=" << c->delta_value << " alpha=" << c->alpha.to_string()
       << " gamma=" << c->gamma.to_string() << " beta=" << c->beta.to_string() << '\n';
  };
  extreme("min", survey.min);
  extreme("max", survey.max);
  for (const auto& [value, count] : survey.histogram) os << value << '\t' << count << '\n';
}

/// Histogram rows of a survey file.
inline std::map<long long, std::size_t> read_survey_histogram(std::istream& is) {
  std::map<long long, std::size_t> histogram;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto f = io::row_fields(line, 2, "delta_survey.tsv", line_no);
    histogram[io::parse_number<long long>(f[0], "delta_value")] = io::parse_number<std::size_t>(f[1], "count");
  }
  return histogram;
}

}  // namespace krlab
