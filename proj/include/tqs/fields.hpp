#pragma once

#include "tqs/model.hpp"
#include "tqs/vec2.hpp"

namespace tqs {

/// Force at `pos`. Always (F_x, 0) and a function of pos.x only.
/// Band and half-plane boundaries are closed: |x| == delta and x == 0 are inside.
Vec2 eval_field(const FieldSpec& spec, const Vec2& pos);

}  // namespace tqs
