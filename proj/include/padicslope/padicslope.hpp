#pragma once

#include "padicslope/padic_core.hpp"
#include "padicslope/int_matrix.hpp"
#include "padicslope/lattice_algebra.hpp"
#include "padicslope/newton.hpp"
#include "padicslope/bounds.hpp"
#include "padicslope/family_sim.hpp"
#include "padicslope/report_io.hpp"
