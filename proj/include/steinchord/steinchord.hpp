#pragma once

#include "steinchord/bounds.hpp"
#include "steinchord/chord_diagram.hpp"
#include "steinchord/distances.hpp"
#include "steinchord/enumerate.hpp"
#include "steinchord/exact_laws.hpp"
#include "steinchord/montecarlo.hpp"
#include "steinchord/pmf.hpp"
#include "steinchord/rational.hpp"
#include "steinchord/report.hpp"
#include "steinchord/rng.hpp"
#include "steinchord/sizebias.hpp"
#include "steinchord/statistics.hpp"
