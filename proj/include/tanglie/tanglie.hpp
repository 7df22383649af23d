#pragma once

#include "tanglie/errors.hpp"
#include "tanglie/lie_core.hpp"
#include "tanglie/metric_geometry.hpp"
#include "tanglie/symplectic_lift.hpp"
#include "tanglie/tangent_lift.hpp"
#include "tanglie/tensor.hpp"
