// Copyright the nlbvp authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "nlbvp/core.hpp"
#include "nlbvp/krein.hpp"
#include "nlbvp/boundary_triple.hpp"
#include "nlbvp/random.hpp"
#include "nlbvp/opfunc.hpp"
#include "nlbvp/realize.hpp"
#include "nlbvp/elliptic.hpp"
#include "nlbvp/solver.hpp"
#include "nlbvp/expression.hpp"
#include "nlbvp/io.hpp"
