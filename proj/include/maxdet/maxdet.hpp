#pragma once

#include "maxdet/border_search.hpp"
#include "maxdet/bounds.hpp"
#include "maxdet/constructions.hpp"
#include "maxdet/exact.hpp"
#include "maxdet/io.hpp"
#include "maxdet/lemmas.hpp"
#include "maxdet/number_theory.hpp"
#include "maxdet/order_sieve.hpp"
#include "maxdet/table1.hpp"
