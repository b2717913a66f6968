#pragma once

// The reference prefix computer: a loop-free machine over 3-bit opcodes. Every
// valid program ends with its only HALT, so the valid program set is prefix-free.

#include "krlab/bitstring.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace krlab {

enum class Opcode : std::uint8_t {
  Append0 = 0b000,
  Append1 = 0b001,
  CopyData = 0b010,
  Dup = 0b011,
  DropLast = 0b100,
  Flip = 0b101,
  Invalid = 0b110,
  Halt = 0b111,
};

inline constexpr std::size_t kOpcodeWidth = 3;

inline constexpr std::array<Opcode, 6> kBodyOpcodes = {
    Opcode::Append0, Opcode::Append1, Opcode::CopyData, Opcode::Dup, Opcode::DropLast, Opcode::Flip,
};

inline std::string_view mnemonic(Opcode op) {
  switch (op) {
    case Opcode::Append0: return "APPEND0";
    case Opcode::Append1: return "APPEND1";
    case Opcode::CopyData: return "COPYDATA";
    case Opcode::Dup: return "DUP";
    case Opcode::DropLast: return "DROPLAST";
    case Opcode::Flip: return "FLIP";
    case Opcode::Invalid: return "INVALID";
    case Opcode::Halt: return "HALT";
  }
  return "?";
}

struct MachineSpec {
  std::string machine_id = "slp3-v1";
  std::size_t opcode_width = kOpcodeWidth;
  std::uint64_t step_budget_default = 10'000;

  bool operator==(const MachineSpec&) const = default;
};

enum class Undefined : std::uint8_t {
  BadDecode,
  RuntimeFault,
  BudgetExceeded,
  NoSuchProgram,    // W only: (program, data) not in the table
  UnknownComputer,  // W only: inner string outside the simple set
};

inline std::string_view to_string(Undefined u) {
  switch (u) {
    case Undefined::BadDecode: return "BadDecode";
    case Undefined::RuntimeFault: return "RuntimeFault";
    case Undefined::BudgetExceeded: return "BudgetExceeded";
    case Undefined::NoSuchProgram: return "NoSuchProgram";
    case Undefined::UnknownComputer: return "UnknownComputer";
  }
  return "?";
}

/// Either the single output of a halting run, or why the computation is undefined.
class RunOutcome {
 public:
  RunOutcome(BitString output) : state_(std::move(output)) {}  // NOLINT(google-explicit-constructor)
  RunOutcome(Undefined reason) : state_(reason) {}             // NOLINT(google-explicit-constructor)

  bool defined() const noexcept { return std::holds_alternative<BitString>(state_); }
  const BitString& output() const { return std::get<BitString>(state_); }
  Undefined reason() const { return std::get<Undefined>(state_); }

  bool operator==(const RunOutcome&) const = default;

 private:
  std::variant<BitString, Undefined> state_;
};

using OpcodeSequence = std::vector<Opcode>;

/// Splits bits into opcodes. Fails unless the sequence is non-empty, ends in its only
/// HALT and contains no INVALID opcode.
inline std::optional<OpcodeSequence> decode(const BitString& bits) {
  if (bits.empty() || bits.size() % kOpcodeWidth != 0) return std::nullopt;
  OpcodeSequence ops;
  ops.reserve(bits.size() / kOpcodeWidth);
  for (std::size_t i = 0; i < bits.size(); i += kOpcodeWidth) {
    const auto code = static_cast<std::uint8_t>((bits[i] << 2) | (bits[i + 1] << 1) | bits[i + 2]);
    const auto op = static_cast<Opcode>(code);
    if (op == Opcode::Invalid) return std::nullopt;
    const bool last = i + kOpcodeWidth == bits.size();
    if ((op == Opcode::Halt) != last) return std::nullopt;
    ops.push_back(op);
  }
  return ops;
}

inline BitString encode(const OpcodeSequence& ops) {
  std::string bits;
  bits.reserve(ops.size() * kOpcodeWidth);
  for (Opcode op : ops) {
    const auto code = static_cast<unsigned>(op);
    bits.push_back((code & 4) ? '1' : '0');
    bits.push_back((code & 2) ? '1' : '0');
    bits.push_back((code & 1) ? '1' : '0');
  }
  return BitString::from_bits(bits);
}

/// Executes a decoded program. Each opcode costs max(1, bits written or removed) steps.
inline RunOutcome execute(const OpcodeSequence& ops, const BitString& data, std::uint64_t budget) {
  BitString reg;
  std::uint64_t steps = 0;
  auto charge = [&](std::uint64_t cost) {
    steps += cost < 1 ? 1 : cost;
    return steps <= budget;
  };
  for (Opcode op : ops) {
    switch (op) {
      case Opcode::Append0:
      case Opcode::Append1:
        if (!charge(1)) return Undefined::BudgetExceeded;
        reg.push_back(op == Opcode::Append1);
        break;
      case Opcode::CopyData:
        if (!charge(data.size())) return Undefined::BudgetExceeded;
        reg.append(data);
        break;
      case Opcode::Dup: {
        if (!charge(reg.size())) return Undefined::BudgetExceeded;
        BitString copy = reg;
        reg.append(copy);
        break;
      }
      case Opcode::DropLast:
        if (reg.empty()) return Undefined::RuntimeFault;
        if (!charge(1)) return Undefined::BudgetExceeded;
        reg.pop_back();
        break;
      case Opcode::Flip:
        if (!charge(reg.size())) return Undefined::BudgetExceeded;
        reg.flip();
        break;
      case Opcode::Halt:
        if (!charge(1)) return Undefined::BudgetExceeded;
        return reg;
      case Opcode::Invalid:
        return Undefined::BadDecode;
    }
  }
  return Undefined::BadDecode;
}

inline RunOutcome run(const BitString& program, const BitString& data, std::uint64_t budget) {
  auto ops = decode(program);
  if (!ops) return Undefined::BadDecode;
  return execute(*ops, data, budget);
}

/// Every valid program of at most max_len_bits bits, ascending length then lexicographic.
/// There are 6^(k-1) programs with k opcodes.
inline std::vector<BitString> enumerate(std::size_t max_len_bits) {
  std::vector<BitString> out;
  const std::size_t max_ops = max_len_bits / kOpcodeWidth;
  std::vector<OpcodeSequence> layer{{}};
  for (std::size_t k = 1; k <= max_ops; ++k) {
    for (const auto& body : layer) {
      OpcodeSequence prog = body;
      prog.push_back(Opcode::Halt);
      out.push_back(encode(prog));
    }
    if (k == max_ops) break;
    // Body opcodes are listed in ascending code order, so extending in that order keeps
    // each layer lexicographically sorted.
    std::vector<OpcodeSequence> next;
    next.reserve(layer.size() * kBodyOpcodes.size());
    for (const auto& body : layer) {
      for (Opcode op : kBodyOpcodes) {
        OpcodeSequence ext = body;
        ext.push_back(op);
        next.push_back(std::move(ext));
      }
    }
    layer = std::move(next);
  }
  return out;
}

/// The program APPEND(x1) ... APPEND(xn) HALT, which prints x on any data.
inline BitString literal_program(const BitString& x) {
  OpcodeSequence ops;
  for (std::size_t i = 0; i < x.size(); ++i) ops.push_back(x[i] ? Opcode::Append1 : Opcode::Append0);
  ops.push_back(Opcode::Halt);
  return encode(ops);
}

}  // namespace krlab
