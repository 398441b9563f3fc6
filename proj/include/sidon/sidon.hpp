#pragma once

#include "sidon/bounds.hpp"
#include "sidon/census.hpp"
#include "sidon/error.hpp"
#include "sidon/exact.hpp"
#include "sidon/incremental_checker.hpp"
#include "sidon/integer_set.hpp"
#include "sidon/montecarlo.hpp"
#include "sidon/random.hpp"
#include "sidon/representation.hpp"
#include "sidon/triple.hpp"
