#pragma once

// Umbrella header.

#include "eulerdisc/basis.hpp"
#include "eulerdisc/bessel.hpp"
#include "eulerdisc/checks.hpp"
#include "eulerdisc/config.hpp"
#include "eulerdisc/dynamics.hpp"
#include "eulerdisc/field.hpp"
#include "eulerdisc/group.hpp"
#include "eulerdisc/presets.hpp"
#include "eulerdisc/quadrature.hpp"
#include "eulerdisc/runner.hpp"
#include "eulerdisc/slice.hpp"
#include "eulerdisc/transforms.hpp"
