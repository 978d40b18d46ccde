#pragma once

#include "minangle/angles.hpp"
#include "minangle/errors.hpp"
#include "minangle/family.hpp"
#include "minangle/generators.hpp"
#include "minangle/geometry.hpp"
#include "minangle/mesh.hpp"
#include "minangle/regularity.hpp"
#include "minangle/report.hpp"
