#pragma once

#include "curvspec/analysis.hpp"
#include "curvspec/curve_def.hpp"
#include "curvspec/dirac.hpp"
#include "curvspec/eigensolve.hpp"
#include "curvspec/error.hpp"
#include "curvspec/expr.hpp"
#include "curvspec/geometry.hpp"
#include "curvspec/report_io.hpp"
#include "curvspec/schrodinger2d.hpp"
#include "curvspec/sturm1d.hpp"
