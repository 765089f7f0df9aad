#pragma once

#include "projhull/curvelib.hpp"
#include "projhull/disk_search.hpp"
#include "projhull/diskmaps.hpp"
#include "projhull/errors.hpp"
#include "projhull/hullscan.hpp"
#include "projhull/json_format.hpp"
#include "projhull/logspace.hpp"
#include "projhull/nelder_mead.hpp"
#include "projhull/polyring.hpp"
#include "projhull/simplex.hpp"
#include "projhull/theorem3.hpp"

namespace projhull {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace projhull
