#pragma once

#include "coalesce/models/builders.hpp"
#include "coalesce/models/ladder_bloch.hpp"
#include "coalesce/models/spec.hpp"
#include "coalesce/models/states.hpp"
