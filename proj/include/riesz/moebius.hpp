#pragma once

// Translations, homotheties about the origin, sphere inversions and their
// compositions, acting on shapes through their parameterizations. Maps are
// templated on the scalar type so the derivative jets of transformed shapes
// come from exact differentiation of the composition.

#include <string>
#include <vector>

#include "riesz/closed_energy.hpp"
#include "riesz/shapes.hpp"

namespace riesz {

class MoebiusMap {
 public:
  enum class Kind { translation, homothety, inversion, composition };
  struct Step {
    Kind kind;
    Vec3d v;             // translation vector or inversion center
    double s = 1.0;      // homothety ratio or inversion radius
  };

  static MoebiusMap identity() { return MoebiusMap(); }
  static MoebiusMap translation(const Vec3d& v);
  static MoebiusMap homothety(double c);
  static MoebiusMap inversion(const Vec3d& center, double radius = 1.0);

  // (a * b)(p) = a(b(p))
  friend MoebiusMap operator*(const MoebiusMap& a, const MoebiusMap& b);

  Kind kind() const;
  MoebiusMap inverse() const;
  const std::vector<Step>& steps() const { return steps_; }
  std::string describe() const;

  template <class T>
  Vec3<T> apply(Vec3<T> p) const {
    for (const Step& st : steps_) {
      switch (st.kind) {
        case Kind::translation:
          p = Vec3<T>{p.x + st.v.x, p.y + st.v.y, p.z + st.v.z};
          break;
        case Kind::homothety:
          p = st.s * p;
          break;
        default: {
          const Vec3<T> q{p.x - st.v.x, p.y - st.v.y, p.z - st.v.z};
          const T f = (st.s * st.s) / dot(q, q);
          p = Vec3<T>{st.v.x + f * q.x, st.v.y + f * q.y, st.v.z + f * q.z};
        }
      }
    }
    return p;
  }
  Vec3d operator()(const Vec3d& p) const { return apply(p); }

  // Conformal factor |dT| at p.
  double scale_factor(const Vec3d& p) const;
  bool keeps_plane() const;  // maps the plane z = 0 to itself

 private:
  std::vector<Step> steps_;  // applied first to last
};

// Image of a shape; throws CenterTooClose when an inversion center comes
// within 0.3 diameters of the shape (or lies inside a domain).
Shape transform_shape(const MoebiusMap& T, const Shape& shape);

struct InvarianceReport {
  cplx original;
  cplx image;
  double defect = 0.0;          // |E_S - E_T(S)|
  double error_estimate = 0.0;  // root-sum-square of the two estimates
  double tolerance = 0.0;       // 3 x error_estimate
  bool pass = false;
  // homotheties only: c^{2m+z}(E + log c R) - E
  bool has_prediction = false;
  cplx predicted_defect = 0.0;
};

InvarianceReport invariance_check(const Shape& shape, cplx z, const MoebiusMap& T,
                                  const EnergyOptions& opts = {});

}  // namespace riesz
