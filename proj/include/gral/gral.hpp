#pragma once

#include "gral/algebra.hpp"
#include "gral/center.hpp"
#include "gral/characters.hpp"
#include "gral/group.hpp"
#include "gral/json_io.hpp"
#include "gral/lie.hpp"
#include "gral/subspace.hpp"
#include "gral/types.hpp"
