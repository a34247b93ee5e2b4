#ifndef CLUSTERDYN_GROUPREP_HPP
#define CLUSTERDYN_GROUPREP_HPP

#include "clusterdyn/algebra.hpp"

#include <cstdint>

namespace clusterdyn {

// Element of the solvable group G_z in parameter form. Parameters compose
// exactly under products; the matrix is materialized on demand.
struct GroupElement {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double z = 0.0;
};

// [[e^{-z a}, 0, c], [0, e^{-z a}, b], [0, 0, 1]]
Mat3 matrix_of(const GroupElement& g);

// Parameters of matrix_of(g1) * matrix_of(g2):
//   a = a1 + a2, b = b1 + e^{-z a1} b2, c = c1 + e^{-z a1} c2.
// Throws invalid_argument when the z values differ.
GroupElement group_product(const GroupElement& g1, const GroupElement& g2);

struct LieGenerators {
    Mat3 d;  // diag(-z, -z, 0)
    Mat3 p1; // unit entry row 2, col 3
    Mat3 p2; // unit entry row 1, col 3
};

// Satisfy [D,P1] = -z P1, [D,P2] = -z P2, [P1,P2] = 0 exactly.
LieGenerators lie_generators(double z);

// Checks that the group multiplication is a Poisson map for the (z, kappa)
// bracket: for sampled pairs of elements, compares the pushforward of the
// block-diagonal Poisson tensor through the product map against the tensor at
// the product point, for the coordinate pairs (a,b), (a,c), (b,c). Returns the
// maximum absolute residual over all samples.
double poisson_lie_check(const DeformParams& p, int sample_count, std::uint64_t seed);

} // namespace clusterdyn

#endif
