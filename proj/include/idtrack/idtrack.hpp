#pragma once

#include "idtrack/archetypes.hpp"
#include "idtrack/cost.hpp"
#include "idtrack/errors.hpp"
#include "idtrack/geometry.hpp"
#include "idtrack/harness.hpp"
#include "idtrack/io.hpp"
#include "idtrack/partition.hpp"
#include "idtrack/path.hpp"
#include "idtrack/perturb.hpp"
#include "idtrack/random.hpp"
#include "idtrack/resolve.hpp"
#include "idtrack/scene.hpp"
#include "idtrack/solver.hpp"
#include "idtrack/svg.hpp"

namespace idtrack {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace idtrack
