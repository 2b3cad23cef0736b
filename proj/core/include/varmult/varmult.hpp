#pragma once

#include "varmult/checker.hpp"
#include "varmult/errors.hpp"
#include "varmult/expr.hpp"
#include "varmult/jetops.hpp"
#include "varmult/rational.hpp"
#include "varmult/symexpr.hpp"
#include "varmult/testkit.hpp"
#include "varmult/varcore.hpp"
