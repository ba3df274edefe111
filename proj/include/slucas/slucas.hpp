#pragma once

/** @file slucas.hpp
 *  Umbrella header.
 */

#include "natural.hpp"
#include "jacobi.hpp"
#include "sieve.hpp"
#include "random.hpp"
#include "lucas.hpp"
#include "classical.hpp"
#include "counting.hpp"
#include "generation.hpp"
#include "bounds.hpp"
#include "tables.hpp"
