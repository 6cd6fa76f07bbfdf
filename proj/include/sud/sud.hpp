#pragma once

#include "sud/asymptotic_constant.hpp"
#include "sud/character_oracle.hpp"
#include "sud/core.hpp"
#include "sud/partition.hpp"
#include "sud/polynomial.hpp"
#include "sud/rep_combinatorics.hpp"
#include "sud/risk_engine.hpp"
#include "sud/schemes.hpp"
#include "sud/spectral_optimizer.hpp"
#include "sud/sweep.hpp"
#include "sud/version.hpp"
#include "sud/weights.hpp"
