#pragma once

// qcspan: exact decomposition of discrete quasi-copulas into copulas, optimal
// mass domination, Minkowski norms, uniform series approximation, and
// span-membership probing on the unit square.

#include "qcspan/rational.hpp"
#include "qcspan/errors.hpp"
#include "qcspan/mesh.hpp"
#include "qcspan/grid.hpp"
#include "qcspan/domination.hpp"
#include "qcspan/decomposition.hpp"
#include "qcspan/continuous.hpp"
#include "qcspan/bilinear.hpp"
#include "qcspan/gallery.hpp"
#include "qcspan/series.hpp"
#include "qcspan/span_probe.hpp"
#include "qcspan/grid_json.hpp"
#include "qcspan/csv.hpp"
