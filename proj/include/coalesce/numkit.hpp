#pragma once

#include "coalesce/numkit/eigen.hpp"
#include "coalesce/numkit/expm.hpp"
#include "coalesce/numkit/matrix.hpp"
#include "coalesce/numkit/sparse.hpp"
#include "coalesce/numkit/svd.hpp"
