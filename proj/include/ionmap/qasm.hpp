#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ionmap/tech.hpp"
#include "ionmap/types.hpp"

namespace ionmap {

enum class GateKind { H, X, Y, Z, CX, CY, CZ };

int arity(GateKind g);

/// Every gate in this set is its own inverse.
GateKind inverse_gate(GateKind g);

/// Canonical text name ("H", "C-X", ...).
std::string_view gate_name(GateKind g);

/// Case-insensitive lookup; returns nullopt for unknown names.
std::optional<GateKind> gate_from_name(std::string_view name);

Duration gate_delay(GateKind g, const TechParams& t);

struct Instruction {
  int id = 0;  // ordinal position among instructions, 0-based
  GateKind gate = GateKind::H;
  std::vector<int> operands;  // qubit indices; [0]=source/control, [1]=target

  friend bool operator==(const Instruction& a, const Instruction& b) {
    return a.id == b.id && a.gate == b.gate && a.operands == b.operands;
  }
};

struct QubitDecl {
  std::string name;
  std::optional<long long> init;

  friend bool operator==(const QubitDecl& a, const QubitDecl& b) {
    return a.name == b.name && a.init == b.init;
  }
};

struct Program {
  std::vector<QubitDecl> qubits;
  std::vector<Instruction> instructions;

  std::vector<std::string> qubit_names() const;

  friend bool operator==(const Program& a, const Program& b) {
    return a.qubits == b.qubits && a.instructions == b.instructions;
  }
};

/// Instruction dependency graph. Node ids coincide with instruction ids.
/// In the forward graph every edge points from an earlier instruction to a
/// later one; the uncompute (inverted) graph reverses all edges and replaces
/// each gate with its inverse.
struct Qidg {
  std::vector<Instruction> nodes;
  std::vector<std::vector<int>> preds;  // sorted, deduplicated
  std::vector<std::vector<int>> succs;

  int size() const { return static_cast<int>(nodes.size()); }

  friend bool operator==(const Qidg& a, const Qidg& b) {
    return a.nodes == b.nodes && a.preds == b.preds && a.succs == b.succs;
  }
};

/// Line grammar: `QUBIT <name>[,<init>]`, `<GATE> <q>` or `<GATE> <q1>,<q2>`
/// with GATE in {H,X,Y,Z,C-X,C-Y,C-Z}, case-insensitive. Blank lines and
/// lines starting with '#' are ignored. Throws ParseError.
Program parse_qasm(const std::string& text);

/// Normalized rendering: single space after the opcode, comma-separated
/// operands without spaces, LF line endings. parse(serialize(p)) == p.
std::string serialize_program(const Program& p);

/// B depends on A iff A precedes B, they share a qubit, and no instruction
/// between them touches that qubit (per-qubit chains).
Qidg build_qidg(const Program& p);

Qidg invert_to_uidg(const Qidg& g);

/// Longest gate-delay path through the DAG: the latency lower bound with
/// routing and congestion ignored.
Duration ideal_latency(const Qidg& g, const TechParams& t);

}  // namespace ionmap
