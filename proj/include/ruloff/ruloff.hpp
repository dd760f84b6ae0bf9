#pragma once

#include "ruloff/curve_io.hpp"
#include "ruloff/errors.hpp"
#include "ruloff/nurbs.hpp"
#include "ruloff/obj_io.hpp"
#include "ruloff/offset.hpp"
#include "ruloff/overlap.hpp"
#include "ruloff/parallel.hpp"
#include "ruloff/pipeline.hpp"
#include "ruloff/pso.hpp"
#include "ruloff/spline.hpp"
#include "ruloff/subdivide.hpp"
#include "ruloff/surface.hpp"
#include "ruloff/svg.hpp"
#include "ruloff/transition.hpp"
#include "ruloff/vec3.hpp"
