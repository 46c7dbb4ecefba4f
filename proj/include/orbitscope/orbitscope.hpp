#pragma once

#include "orbitscope/error.hpp"
#include "orbitscope/numeric/expm.hpp"
#include "orbitscope/numeric/json_io.hpp"
#include "orbitscope/numeric/linalg.hpp"
#include "orbitscope/numeric/random.hpp"
#include "orbitscope/grassmann/classify.hpp"
#include "orbitscope/grassmann/flags.hpp"
#include "orbitscope/exterior/sections.hpp"
#include "orbitscope/isotropic/adapted_basis.hpp"
#include "orbitscope/isotropic/sampling.hpp"
#include "orbitscope/lie/algebra.hpp"
#include "orbitscope/lie/stabilizer.hpp"
#include "orbitscope/lie/tangent.hpp"
#include "orbitscope/slice/density.hpp"
#include "orbitscope/slice/slice_chart.hpp"
#include "orbitscope/harness/campaign.hpp"
