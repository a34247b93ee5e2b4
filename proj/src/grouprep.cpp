#include "clusterdyn/grouprep.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace clusterdyn {

Mat3 matrix_of(const GroupElement& g) {
    const double w = std::exp(-g.z * g.a);
    return Mat3{{{w, 0.0, g.c}, {0.0, w, g.b}, {0.0, 0.0, 1.0}}};
}

GroupElement group_product(const GroupElement& g1, const GroupElement& g2) {
    if (g1.z != g2.z)
        throw std::invalid_argument("group elements with different z do not compose");
    const double w = std::exp(-g1.z * g1.a);
    return GroupElement{g1.a + g2.a, g1.b + w * g2.b, g1.c + w * g2.c, g1.z};
}

LieGenerators lie_generators(double z) {
    LieGenerators gen;
    gen.d = Mat3{{{-z, 0.0, 0.0}, {0.0, -z, 0.0}, {0.0, 0.0, 0.0}}};
    gen.p1 = Mat3{{{0.0, 0.0, 0.0}, {0.0, 0.0, 1.0}, {0.0, 0.0, 0.0}}};
    gen.p2 = Mat3{{{0.0, 0.0, 1.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}}};
    return gen;
}

double poisson_lie_check(const DeformParams& p, int sample_count, std::uint64_t seed) {
    check_params(p);
    if (sample_count < 1) throw std::invalid_argument("sample_count must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    double worst = 0.0;
    for (int s = 0; s < sample_count; ++s) {
        const GroupElement g1{coord(rng), coord(rng), coord(rng), p.z};
        const GroupElement g2{coord(rng), coord(rng), coord(rng), p.z};
        const GroupElement g12 = group_product(g1, g2);

        const Mat3 j1 = structure_matrix(p, SiteState{g1.a, g1.b, g1.c});
        const Mat3 j2 = structure_matrix(p, SiteState{g2.a, g2.b, g2.c});
        const Mat3 j12 = structure_matrix(p, SiteState{g12.a, g12.b, g12.c});

        // Rows of the differential of (a,b,c) = product(x1, x2) with respect
        // to (a1,b1,c1,a2,b2,c2).
        const double w = std::exp(-p.z * g1.a);
        const double dphi[3][6] = {
            {1.0, 0.0, 0.0, 1.0, 0.0, 0.0},
            {-p.z * w * g2.b, 1.0, 0.0, 0.0, w, 0.0},
            {-p.z * w * g2.c, 0.0, 1.0, 0.0, 0.0, w},
        };
        // Block-diagonal source tensor: J6 = diag(j1, j2).
        for (int r = 0; r < 3; ++r) {
            for (int c = r + 1; c < 3; ++c) {
                double lhs = 0.0;
                for (int i = 0; i < 3; ++i)
                    for (int k = 0; k < 3; ++k) {
                        lhs += dphi[r][i] * j1[i][k] * dphi[c][k];
                        lhs += dphi[r][3 + i] * j2[i][k] * dphi[c][3 + k];
                    }
                worst = std::max(worst, std::abs(lhs - j12[r][c]));
            }
        }
    }
    return worst;
}

} // namespace clusterdyn
