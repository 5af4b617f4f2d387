#ifndef EQUIAFFINE_EQUIAFFINE_HPP
#define EQUIAFFINE_EQUIAFFINE_HPP

#include "equiaffine/errors.hpp"
#include "equiaffine/jet.hpp"
#include "equiaffine/expr.hpp"
#include "equiaffine/tensor.hpp"
#include "equiaffine/geometry.hpp"
#include "equiaffine/curvature.hpp"
#include "equiaffine/projective.hpp"
#include "equiaffine/geodesic.hpp"
#include "equiaffine/sampling.hpp"
#include "equiaffine/manifest.hpp"
#include "equiaffine/commands.hpp"

#endif  // EQUIAFFINE_EQUIAFFINE_HPP
