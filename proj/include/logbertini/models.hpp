#pragma once

#include <utility>
#include <vector>

#include "logbertini/bertini.hpp"

namespace logbertini::models {

// The two scenes wired into the command layer. The counterexample chart is
// k[t, u, u^{-1}]/(t^p) with the log structure pulled back along 1 -> (p, 1),
// studied through the global functions (t, u, u^{-1}); it is log smooth as a
// chart, yet no hyperplane section through any of its points is. The node
// is k[x, y]/(xy) over the standard log point with functions (x, y).

inline ChartAlgebra<GF> cx_algebra(long p, long m) {
  MonoidHom h = make_hom(
      AffineMonoid{1, {{Int(1)}}},
      AffineMonoid{2, {{Int(1), Int(0)}, {Int(0), Int(1)}, {Int(0), Int(-1)}}},
      {{Int(p), Int(1)}});
  return make_chart_algebra(GF(p, m), std::move(h), 0, true);
}

inline std::vector<PolyFunc<GF>> cx_functions(const GF& k) {
  auto one_term = [&](std::vector<Int> pe) {
    return PolyFunc<GF>{MonomialTerm<GF>{k.one(), std::move(pe), {}}};
  };
  return {one_term({Int(1), Int(0)}), one_term({Int(0), Int(1)}),
          one_term({Int(0), Int(-1)})};
}

inline ChartAlgebra<GF> node_algebra(long p, long m, long smooth_vars = 0) {
  MonoidHom h = make_hom(AffineMonoid{1, {{Int(1)}}},
                         AffineMonoid{2, {{Int(1), Int(0)}, {Int(0), Int(1)}}},
                         {{Int(1), Int(1)}});
  return make_chart_algebra(GF(p, m), std::move(h), smooth_vars, true);
}

inline std::vector<PolyFunc<GF>> node_functions(const GF& k) {
  auto one_term = [&](std::vector<Int> pe) {
    return PolyFunc<GF>{MonomialTerm<GF>{k.one(), std::move(pe), {}}};
  };
  return {one_term({Int(1), Int(0)}), one_term({Int(0), Int(1)})};
}

}  // namespace logbertini::models
