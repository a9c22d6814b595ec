#pragma once

#include <string>

#include "ionmap/types.hpp"

namespace ionmap {

/// Technology timing and capacity parameters. Defaults are the ion-trap
/// figures used throughout the test suite: 1 us moves, 10 us turns, 10/100 us
/// one-/two-qubit gates, channels and junctions holding two qubits each.
struct TechParams {
  Duration t_move = 1;
  Duration t_turn = 10;
  Duration t_gate_1q = 10;
  Duration t_gate_2q = 100;
  int channel_capacity = 2;
  int junction_capacity = 2;
  double priority_alpha = 1.0;
  double priority_beta = 1.0;

  /// Throws ConfigError if out of range. Gate delays must be positive and
  /// capacities at least 1. Move/turn delays may be zero: the zero-cost
  /// configuration is the ideal-model baseline used by the tests.
  void validate() const;
};

/// Parses `key = value` lines. Blank lines and '#' comments are ignored;
/// unknown keys are rejected. Keys: t_move_us, t_turn_us, t_gate_1q_us,
/// t_gate_2q_us, channel_capacity, junction_capacity, priority_alpha,
/// priority_beta. Missing keys keep their defaults.
TechParams parse_tech_config(const std::string& text);

}  // namespace ionmap
