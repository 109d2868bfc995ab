#include "lawson/symmetry.hpp"

#include <deque>

namespace lawson {

int SymGroup::find(const Mat4& m, double tol) const {
  for (int i = 0; i < size(); ++i)
    if ((elements[i].matrix - m).cwiseAbs().maxCoeff() <= tol) return i;
  return -1;
}

SymGroup SymGroup::lawson(const LawsonParams& p) {
  SymGroup g;

  // spheres of symmetry: Sigma^{j pi/2} (two distinct) and Sigma_{i pi/m}
  for (std::int64_t j = 0; j < 2; ++j) {
    Isometry4 r = reflect_through(p.frame.sigma_upper(Angle::pi_times(j, 2)));
    g.sphere_generators.push_back({r.matrix(), +1, "Sigma^" + std::to_string(j) + "pi/2"});
  }
  for (std::int64_t i = 0; i < p.m; ++i) {
    Isometry4 r = reflect_through(p.frame.sigma_lower(Angle::pi_times(i, p.m)));
    g.sphere_generators.push_back({r.matrix(), +1, "Sigma_" + std::to_string(i) + "pi/m"});
  }
  // circles contained in the surface: C_{(2i-1)pi/2m}^{(2j-1)pi/4}
  for (std::int64_t i = 1; i <= p.m; ++i)
    for (std::int64_t j = 1; j <= 2; ++j) {
      GreatCircle c = p.frame.circle_through(Angle::pi_times(2 * i - 1, 2 * p.m),
                                             Angle::pi_times(2 * j - 1, 4));
      Isometry4 r = reflect_through(c.span());
      g.circle_generators.push_back(
          {r.matrix(), -1, "C_q" + std::to_string(i) + "^q" + std::to_string(j)});
    }

  // closure under composition, parity carried along
  std::vector<GroupElement> gens = g.sphere_generators;
  gens.insert(gens.end(), g.circle_generators.begin(), g.circle_generators.end());

  g.elements.push_back({Mat4::Identity(), +1, "id"});
  std::deque<int> todo{0};
  while (!todo.empty()) {
    GroupElement e = g.elements[todo.front()];
    todo.pop_front();
    for (const GroupElement& s : gens) {
      GroupElement prod{s.matrix * e.matrix, s.parity * e.parity, ""};
      int at = g.find(prod.matrix);
      if (at < 0) {
        g.elements.push_back(prod);
        todo.push_back(g.size() - 1);
        if (g.size() > 64 * p.m)
          throw GeometryError("SymGroup: closure did not terminate");
      } else if (g.elements[at].parity != prod.parity) {
        throw GeometryError("SymGroup: inconsistent normal parity");
      }
    }
  }
  return g;
}

}  // namespace lawson
