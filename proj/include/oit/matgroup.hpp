#pragma once

#include "oit/matgroup/cartan.hpp"
#include "oit/matgroup/closure.hpp"
#include "oit/matgroup/dichotomy.hpp"
#include "oit/matgroup/filtration.hpp"
#include "oit/matgroup/level.hpp"
#include "oit/matgroup/lie.hpp"
#include "oit/matgroup/mat_group.hpp"
#include "oit/matgroup/mod_matrix.hpp"
#include "oit/matgroup/normalizer.hpp"
#include "oit/matgroup/subgroups.hpp"
