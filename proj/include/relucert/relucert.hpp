#pragma once

#include "relucert/exact.hpp"
#include "relucert/lp.hpp"
#include "relucert/arrangement.hpp"
#include "relucert/injectivity.hpp"
#include "relucert/range.hpp"
#include "relucert/zonotope.hpp"
#include "relucert/verification.hpp"
#include "relucert/reductions.hpp"
#include "relucert/io.hpp"
