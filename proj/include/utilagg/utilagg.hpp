#pragma once

/// @file utilagg.hpp
/// Umbrella header for the utilagg library.

#include "utilagg/rational.hpp"
#include "utilagg/linalg.hpp"
#include "utilagg/core.hpp"
#include "utilagg/nm.hpp"
#include "utilagg/alt.hpp"
#include "utilagg/harsanyi.hpp"
#include "utilagg/harvey.hpp"
#include "utilagg/coincidence.hpp"
#include "utilagg/society_io.hpp"
#include "utilagg/report.hpp"
