#pragma once

#include <span>
#include <vector>

#include "xypurify/density_matrix.hpp"
#include "xypurify/pumping.hpp"

namespace xypurify {

/// Which node receives U₊ = (I + iσₓ)/√2 and which U₋ = (I − iσₓ)/√2.
enum class RotationAssignment { plus_on_a, minus_on_a, plus_on_both, minus_on_both };

struct CnotRoundResult {
  DensityMatrix post_state;  ///< kept pair, with the source state's labels
  double fidelity = 0.0;
  double success_probability = 0.0;
};

/// Bilateral rotation + CNOT purification gate. The source pair (1_A, 1_B)
/// acts as control and is kept when the target pair (2_A, 2_B) is measured
/// in agreement (00 or 11).
CnotRoundResult cnot_round(const DensityMatrix& source, const DensityMatrix& target,
                           RotationAssignment rotations = RotationAssignment::plus_on_a);

/// (1 − 2f + 10f²) / (5 − 4f + 8f²): one successful round on two Werner pairs.
double cnot_fidelity_formula(double f);

/// Entanglement pumping with the CNOT gate: the stored pair is the source and
/// a fresh Werner(f) pair the target in every round. The exact stored state is
/// carried between rounds without twirling.
PumpTrace scheme_c_pump(double f, int n, const PumpOptions& options = {});

struct Figure5bRow {
  double f = 0.0;
  double xy_fidelity = 0.0;         ///< F̃(T, f)
  double cnot_fidelity = 0.0;       ///< single CNOT round
  double scheme_c_two_rounds = 0.0; ///< two pumping rounds with the CNOT gate
};

std::vector<Figure5bRow> compare_figure5b(std::span<const double> f_grid);

}  // namespace xypurify
