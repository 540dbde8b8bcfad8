#pragma once

#include <algorithm>
#include <cmath>

#include "dnls/spectral.hpp"
#include "dnls/wellposedness.hpp"

namespace oracle {

using namespace dnls;

// Direct sum over N1, N3, N2, N4 and M with a fresh projection for every
// shell; no telescoping, no caching.
inline EnergyBlocks naive_blocks(const ComplexField& u1, const ComplexField& u2, const Background& bg,
                          double t, Dyadic n, const Comparability& cmp) {
  const GridPtr g = u1.grid_ptr();
  const ComplexField w = u1 - u2;
  const ComplexField r = bg.decaying_remainder(t, g);
  const auto inh = inhomogeneous_dyadic_range(*g);
  auto P = [](const ComplexField& f, Dyadic d) { return lp_project(f, d, LpKind::inhomogeneous); };
  auto ip = [&](const ComplexField& a, const ComplexField& b, const ComplexField& c) {
    return std::real(cplx(0, 1) * integrate(pointwise_product(pointwise_product(a, b), c)));
  };
  EnergyBlocks out;
  for (Dyadic n1 : inh) {
    const ComplexField a = anti_derivative(P(P(P(w.conj(), n), n), n1));
    for (Dyadic n3 : inh) {
      if (!cmp.similar_to(n1.value(), n3.value())) continue;
      const ComplexField b = derivative(P(u2, n3), 1);
      for (Dyadic n2 : inh) {
        for (Dyadic n4 : inh) {
          const double big = std::max(n2.value(), n4.value());
          if (!cmp.much_greater_than(n1.value(), big) || !cmp.much_greater_than(n3.value(), big)) {
            continue;
          }
          const ComplexField f1 = pointwise_product(P(w.conj(), n2), P(u1, n4));
          const ComplexField f2 = pointwise_product(P(w, n2), P(u2.conj(), n4));
          const ComplexField f3 = pointwise_product(P(w, n2), P(r.conj(), n4));
          for (int m = -64; m <= 64; ++m) {
            const double mv = std::ldexp(1.0, m);
            if (mv < 1.0 / n1.value() || mv > std::pow(n1.value(), 2.0 / 3.0) * (1 + 1e-12)) continue;
            const Dyadic md{m};
            out.e1 += ip(a, b, anti_derivative(lp_project(f1, md, LpKind::homogeneous)));
            out.e2 += ip(a, b, anti_derivative(lp_project(f2, md, LpKind::homogeneous)));
            ComplexField c3 = anti_derivative(lp_project(f3, md, LpKind::homogeneous));
            for (auto& v : c3.values()) v = std::real(v);
            out.e3 += ip(a, b, c3);
          }
        }
      }
    }
  }
  return out;
}

}  // namespace oracle
