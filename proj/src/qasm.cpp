#include "ionmap/qasm.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "ionmap/errors.hpp"

namespace ionmap {

int arity(GateKind g) {
  switch (g) {
    case GateKind::H:
    case GateKind::X:
    case GateKind::Y:
    case GateKind::Z:
      return 1;
    case GateKind::CX:
    case GateKind::CY:
    case GateKind::CZ:
      return 2;
  }
  return 1;
}

GateKind inverse_gate(GateKind g) {
  // H, X, Y, Z and their controlled forms are involutions. A gate set
  // extension with non-self-inverse gates must extend this table.
  return g;
}

std::string_view gate_name(GateKind g) {
  switch (g) {
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::CX: return "C-X";
    case GateKind::CY: return "C-Y";
    case GateKind::CZ: return "C-Z";
  }
  return "?";
}

std::optional<GateKind> gate_from_name(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  static const std::unordered_map<std::string, GateKind> table = {
      {"H", GateKind::H},    {"X", GateKind::X},    {"Y", GateKind::Y},
      {"Z", GateKind::Z},    {"C-X", GateKind::CX}, {"C-Y", GateKind::CY},
      {"C-Z", GateKind::CZ},
  };
  auto it = table.find(upper);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

Duration gate_delay(GateKind g, const TechParams& t) {
  return arity(g) == 1 ? t.t_gate_1q : t.t_gate_2q;
}

std::vector<std::string> Program::qubit_names() const {
  std::vector<std::string> names;
  names.reserve(qubits.size());
  for (const auto& q : qubits) names.push_back(q.name);
  return names;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_commas(std::string_view s) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(',', start);
    if (pos == std::string_view::npos) {
      parts.push_back(trim(s.substr(start)));
      break;
    }
    parts.push_back(trim(s.substr(start, pos - start)));
    start = pos + 1;
  }
  return parts;
}

bool valid_identifier(const std::string& s) {
  if (s.empty()) return false;
  for (unsigned char c : s) {
    if (!(std::isalnum(c) || c == '_')) return false;
  }
  return true;
}

}  // namespace

Program parse_qasm(const std::string& text) {
  Program program;
  std::unordered_map<std::string, int> qubit_index;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;

    std::size_t space = line.find_first_of(" \t");
    std::string opcode = line.substr(0, space);
    std::string rest = space == std::string::npos ? "" : trim(line.substr(space));

    std::string opcode_upper = opcode;
    std::transform(opcode_upper.begin(), opcode_upper.end(),
                   opcode_upper.begin(),
                   [](unsigned char c) { return std::toupper(c); });

    if (opcode_upper == "QUBIT") {
      if (rest.empty())
        throw ParseError(ParseError::Kind::MalformedLine, line_no,
                         "QUBIT requires a name");
      auto parts = split_commas(rest);
      if (parts.size() > 2 || !valid_identifier(parts[0]))
        throw ParseError(ParseError::Kind::MalformedLine, line_no,
                         "malformed QUBIT declaration");
      if (qubit_index.count(parts[0]))
        throw ParseError(ParseError::Kind::DuplicateQubit, line_no,
                         "duplicate qubit '" + parts[0] + "'");
      QubitDecl decl;
      decl.name = parts[0];
      if (parts.size() == 2) {
        try {
          std::size_t consumed = 0;
          decl.init = std::stoll(parts[1], &consumed);
          if (consumed != parts[1].size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
          throw ParseError(ParseError::Kind::MalformedLine, line_no,
                           "malformed initial value '" + parts[1] + "'");
        }
      }
      qubit_index[decl.name] = static_cast<int>(program.qubits.size());
      program.qubits.push_back(std::move(decl));
      continue;
    }

    auto gate = gate_from_name(opcode_upper);
    if (!gate)
      throw ParseError(ParseError::Kind::UnknownGate, line_no,
                       "unknown gate '" + opcode + "'");
    if (rest.empty())
      throw ParseError(ParseError::Kind::ArityMismatch, line_no,
                       "gate requires operands");
    auto parts = split_commas(rest);
    for (const auto& part : parts) {
      if (!valid_identifier(part))
        throw ParseError(ParseError::Kind::MalformedLine, line_no,
                         "malformed operand '" + part + "'");
    }
    if (static_cast<int>(parts.size()) != arity(*gate))
      throw ParseError(ParseError::Kind::ArityMismatch, line_no,
                       "gate " + std::string(gate_name(*gate)) + " takes " +
                           std::to_string(arity(*gate)) + " operand(s)");
    Instruction ins;
    ins.id = static_cast<int>(program.instructions.size());
    ins.gate = *gate;
    for (const auto& part : parts) {
      auto it = qubit_index.find(part);
      if (it == qubit_index.end())
        throw ParseError(ParseError::Kind::UndeclaredQubit, line_no,
                         "undeclared qubit '" + part + "'");
      ins.operands.push_back(it->second);
    }
    if (ins.operands.size() == 2 && ins.operands[0] == ins.operands[1])
      throw ParseError(ParseError::Kind::ArityMismatch, line_no,
                       "two-qubit gate operands must be distinct");
    program.instructions.push_back(std::move(ins));
  }
  return program;
}

std::string serialize_program(const Program& p) {
  std::ostringstream out;
  for (const auto& q : p.qubits) {
    out << "QUBIT " << q.name;
    if (q.init) out << ',' << *q.init;
    out << '\n';
  }
  for (const auto& ins : p.instructions) {
    out << gate_name(ins.gate) << ' ';
    for (std::size_t i = 0; i < ins.operands.size(); ++i) {
      if (i) out << ',';
      out << p.qubits[ins.operands[i]].name;
    }
    out << '\n';
  }
  return out.str();
}

Qidg build_qidg(const Program& p) {
  Qidg g;
  g.nodes = p.instructions;
  g.preds.assign(g.nodes.size(), {});
  g.succs.assign(g.nodes.size(), {});

  std::vector<int> last_touch(p.qubits.size(), -1);
  for (const auto& ins : p.instructions) {
    for (int q : ins.operands) {
      int prev = last_touch[q];
      if (prev >= 0) {
        g.preds[ins.id].push_back(prev);
        g.succs[prev].push_back(ins.id);
      }
      last_touch[q] = ins.id;
    }
  }
  auto dedupe = [](std::vector<int>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  for (auto& v : g.preds) dedupe(v);
  for (auto& v : g.succs) dedupe(v);
  return g;
}

Qidg invert_to_uidg(const Qidg& g) {
  Qidg inv;
  inv.nodes = g.nodes;
  for (auto& node : inv.nodes) node.gate = inverse_gate(node.gate);
  inv.preds = g.succs;
  inv.succs = g.preds;
  return inv;
}

Duration ideal_latency(const Qidg& g, const TechParams& t) {
  const int n = g.size();
  // Kahn topological order; works for both forward and uncompute graphs.
  std::vector<int> indeg(n, 0);
  for (int i = 0; i < n; ++i) indeg[i] = static_cast<int>(g.preds[i].size());
  std::vector<int> order;
  order.reserve(n);
  for (int i = 0; i < n; ++i)
    if (indeg[i] == 0) order.push_back(i);
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (int s : g.succs[order[head]])
      if (--indeg[s] == 0) order.push_back(s);
  }
  if (static_cast<int>(order.size()) != n)
    throw std::logic_error("dependency graph has a cycle");

  std::vector<Duration> longest(n, 0);
  Duration best = 0;
  for (int id : order) {
    Duration into = 0;
    for (int pre : g.preds[id]) into = std::max(into, longest[pre]);
    longest[id] = into + gate_delay(g.nodes[id].gate, t);
    best = std::max(best, longest[id]);
  }
  return best;
}

}  // namespace ionmap
