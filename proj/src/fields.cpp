#include "tqs/fields.hpp"

#include <cmath>

namespace tqs {

namespace {

struct ForceX {
  double x;

  double operator()(const field::Zero&) const { return 0.0; }
  double operator()(const field::HalfPlaneConstant& f) const { return x >= 0.0 ? f.F0 : 0.0; }
  double operator()(const field::BandConstant& f) const { return std::abs(x) <= f.delta ? f.F0 : 0.0; }
  double operator()(const field::GaussianBand& f) const { return f.F0 * std::exp(-f.sigma * x * x); }
};

}  // namespace

Vec2 eval_field(const FieldSpec& spec, const Vec2& pos) {
  return {std::visit(ForceX{pos.x}, spec), 0.0};
}

}  // namespace tqs
