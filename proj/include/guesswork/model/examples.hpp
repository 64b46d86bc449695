#pragma once
// Named ensembles used by the examples, tests and the CLI generator.

#include <cstdint>

#include "guesswork/model/ensemble.hpp"

namespace guesswork::examples {

/// Uniform {|0>, |1>, |psi(phi)>, |psi(-phi)>} with
/// |psi(phi)> = cos(phi/2)|0> + sin(phi/2)|1>; letters "0", "1", "+", "-".
CqEnsemble bb84_family(double phi);

/// bb84_family(pi/2).
CqEnsemble bb84();

/// Classical analogue of BB84: letters 0, 1, +, - with states |0><0|, |1><1|, 1/2, 1/2.
CqEnsemble classical_bb84();

/// Uniform qubit trine, letters "1", "2", "3" with
/// |psi_k> = cos(2 pi k/3)|0> + sin(2 pi k/3)|1>.
CqEnsemble trine();

/// Uniform ensemble of n Haar-random pure states in dimension d. Letters "x1".."xn".
CqEnsemble random_pure(std::size_t n, std::size_t d, std::uint64_t seed);

/// n letters, every state identical (no side information), uniform.
CqEnsemble uninformative(std::size_t n, std::size_t d);

}  // namespace guesswork::examples
