#pragma once

#include "adreg/analysis.hpp"
#include "adreg/io.hpp"
#include "adreg/linalg.hpp"
#include "adreg/model.hpp"
#include "adreg/nonlin.hpp"
#include "adreg/prime.hpp"
#include "adreg/regulator.hpp"
#include "adreg/scenario.hpp"
#include "adreg/simulate.hpp"
#include "adreg/tuning.hpp"
