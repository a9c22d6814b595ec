#include <doctest.h>

#include "ionmap/errors.hpp"
#include "ionmap/qasm.hpp"
#include "test_helpers.hpp"

using namespace ionmap;
using namespace ionmap::testing;

TEST_CASE("gate kinds") {
  CHECK(arity(GateKind::H) == 1);
  CHECK(arity(GateKind::Z) == 1);
  CHECK(arity(GateKind::CX) == 2);
  CHECK(arity(GateKind::CZ) == 2);
  for (GateKind g : {GateKind::H, GateKind::X, GateKind::Y, GateKind::Z,
                     GateKind::CX, GateKind::CY, GateKind::CZ})
    CHECK(inverse_gate(g) == g);
  CHECK(gate_from_name("c-y") == GateKind::CY);
  CHECK(gate_from_name("h") == GateKind::H);
  CHECK(!gate_from_name("CNOT"));
}

TEST_CASE("parse_qasm basics") {
  Program p = parse_qasm("QUBIT q0,0\nH q0\n");
  REQUIRE(p.qubits.size() == 1);
  CHECK(p.qubits[0].name == "q0");
  CHECK(p.qubits[0].init == 0);
  REQUIRE(p.instructions.size() == 1);
  CHECK(p.instructions[0].gate == GateKind::H);
  CHECK(p.instructions[0].operands == std::vector<int>{0});

  Program empty = parse_qasm("");
  CHECK(empty.qubits.empty());
  CHECK(empty.instructions.empty());

  // comments, blank lines, case-insensitivity, whitespace around commas
  Program loose = parse_qasm(
      "# header\n\nQUBIT a\nQUBIT b , 1\n  c-x  a ,  b\n");
  CHECK(loose.qubits.size() == 2);
  CHECK(loose.qubits[1].init == 1);
  REQUIRE(loose.instructions.size() == 1);
  CHECK(loose.instructions[0].gate == GateKind::CX);
}

TEST_CASE("parse_qasm errors carry line numbers") {
  try {
    parse_qasm("C-X q3,q2\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::UndeclaredQubit);
    CHECK(e.line() == 1);
  }
  try {
    parse_qasm("QUBIT q0\nQUBIT q0\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::DuplicateQubit);
    CHECK(e.line() == 2);
  }
  try {
    parse_qasm("QUBIT q0\nFOO q0\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::UnknownGate);
    CHECK(e.line() == 2);
  }
  try {
    parse_qasm("QUBIT q0\nQUBIT q1\nH q0,q1\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::ArityMismatch);
    CHECK(e.line() == 3);
  }
  try {
    parse_qasm("QUBIT q0\nC-X q0,q0\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::ArityMismatch);
  }
  try {
    parse_qasm("QUBIT q0\nH q0 q0\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::MalformedLine);
  }
  CHECK_THROWS_AS(parse_qasm("QUBIT q0,zz\n"), ParseError);
}

TEST_CASE("shipped encoder asset matches the fixture") {
  Program asset =
      parse_qasm(read_file(data_dir() + "/benchmarks/code513.qasm"));
  Program fixture = parse_qasm(kEncoder513);
  CHECK(asset == fixture);
}

TEST_CASE("serialize round-trips") {
  Program p = parse_qasm(kEncoder513);
  std::string text = serialize_program(p);
  Program again = parse_qasm(text);
  CHECK(again == p);
  // normalized form is a fixed point
  CHECK(serialize_program(again) == text);

  Rng rng(42);
  for (int i = 0; i < 50; ++i) {
    Program r = random_program(rng, 12, 40);
    CHECK(parse_qasm(serialize_program(r)) == r);
  }
}

TEST_CASE("build_qidg on the [[5,1,3]] encoder") {
  Program p = parse_qasm(kEncoder513);
  Qidg g = build_qidg(p);
  REQUIRE(g.size() == 12);

  // Instruction 6 is C-Y q2,q1; its q2 chain predecessor is 5 (C-Z q4,q2)
  // and its q1 chain predecessor is 1 (H q1).
  CHECK(g.preds[6] == std::vector<int>{1, 5});
  // Final instruction (C-Z q4,q0) depends on C-Y q3,q0 and C-X q4,q1.
  CHECK(g.preds[11] == std::vector<int>{8, 10});
  // Sources are exactly the four H gates.
  std::vector<int> sources;
  for (int i = 0; i < g.size(); ++i)
    if (g.preds[i].empty()) sources.push_back(i);
  CHECK(sources == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("build_qidg trivial shapes") {
  Program single = parse_qasm("QUBIT q0\nH q0\n");
  Qidg g1 = build_qidg(single);
  CHECK(g1.size() == 1);
  CHECK(g1.preds[0].empty());
  CHECK(g1.succs[0].empty());

  Program disjoint = parse_qasm("QUBIT a\nQUBIT b\nH a\nH b\n");
  Qidg g2 = build_qidg(disjoint);
  CHECK(g2.preds[0].empty());
  CHECK(g2.preds[1].empty());
  CHECK(g2.succs[0].empty());

  // Repeated pair: one deduplicated edge.
  Program pair = parse_qasm("QUBIT a\nQUBIT b\nC-X a,b\nC-Y a,b\n");
  Qidg g3 = build_qidg(pair);
  CHECK(g3.preds[1] == std::vector<int>{0});
  CHECK(g3.succs[0] == std::vector<int>{1});
}

TEST_CASE("qidg properties on random programs") {
  Rng rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    Program p = random_program(rng, 12, 40);
    Qidg g = build_qidg(p);

    // Acyclic: ideal_latency performs a full topological sort internally
    // and throws on cycles.
    TechParams t;
    CHECK_NOTHROW(ideal_latency(g, t));

    // Edges only point forward in program order.
    for (int i = 0; i < g.size(); ++i)
      for (int pr : g.preds[i]) CHECK(pr < i);

    // Per qubit, the instructions touching it form a chain: each one
    // (except the first) lists the previous toucher among its preds.
    for (int q = 0; q < static_cast<int>(p.qubits.size()); ++q) {
      int prev = -1;
      for (const auto& ins : p.instructions) {
        bool touches = false;
        for (int op : ins.operands) touches |= op == q;
        if (!touches) continue;
        if (prev >= 0) {
          bool found = false;
          for (int pr : g.preds[ins.id]) found |= pr == prev;
          CHECK(found);
        }
        prev = ins.id;
      }
    }
  }
}

TEST_CASE("invert_to_uidg") {
  Program p = parse_qasm(kEncoder513);
  Qidg g = build_qidg(p);
  Qidg u = invert_to_uidg(g);

  // The final forward instruction has no predecessors in the uncompute
  // graph; the first H has no successors.
  CHECK(u.preds[11].empty());
  CHECK(u.succs[0].empty());

  // Involution with identical ids and gates.
  CHECK(invert_to_uidg(u) == g);

  Qidg empty;
  CHECK(invert_to_uidg(empty) == empty);
}

TEST_CASE("ideal_latency") {
  TechParams t;  // 10/100 us gates

  Program h = parse_qasm("QUBIT q0\nH q0\n");
  CHECK(ideal_latency(build_qidg(h), t) == 10);

  Program chain = parse_qasm("QUBIT a\nQUBIT b\nQUBIT c\nC-X a,b\nC-Z b,c\n");
  CHECK(ideal_latency(build_qidg(chain), t) == 200);

  Program empty = parse_qasm("");
  CHECK(ideal_latency(build_qidg(empty), t) == 0);

  // The [[5,1,3]] listing: frozen oracle value. (A longest-path count of
  // six serial two-qubit gates plus one H gives 610 us.)
  Qidg g = build_qidg(parse_qasm(kEncoder513));
  CHECK(oracle_longest_path(g, t) == 610);
  CHECK(ideal_latency(g, t) == 610);
}

TEST_CASE("ideal_latency matches the oracle and is reversal-invariant") {
  TechParams t;
  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    Program p = random_program(rng, 12, 40);
    Qidg g = build_qidg(p);
    Duration fwd = ideal_latency(g, t);
    CHECK(fwd == oracle_longest_path(g, t));
    CHECK(fwd == ideal_latency(invert_to_uidg(g), t));
  }
}
