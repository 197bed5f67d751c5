#pragma once

// Umbrella header.

#include "acoustics.hpp"
#include "assembly.hpp"
#include "banded.hpp"
#include "bottom_profile.hpp"
#include "config.hpp"
#include "csv_report.hpp"
#include "fe_space.hpp"
#include "harness.hpp"
#include "ifd_pform.hpp"
#include "manufactured.hpp"
#include "mesh.hpp"
#include "parabolic.hpp"
#include "projection.hpp"
#include "quadrature.hpp"
#include "schrodinger.hpp"
#include "time_grid.hpp"
