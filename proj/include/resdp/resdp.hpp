#pragma once

#include "resdp/errors.hpp"
#include "resdp/phase_space.hpp"
#include "resdp/group_actions.hpp"
#include "resdp/resonance_maps.hpp"
#include "resdp/casimir.hpp"
#include "resdp/poisson3.hpp"
#include "resdp/dual_pair.hpp"
#include "resdp/dynamics.hpp"
#include "resdp/format.hpp"
#include "resdp/shapes.hpp"
#include "resdp/io.hpp"
#include "resdp/report.hpp"
#include "resdp/verify.hpp"
