#pragma once

#include "lipschitz/rational.hpp"
#include "lipschitz/metric.hpp"
#include "lipschitz/generators.hpp"
#include "lipschitz/linprog.hpp"
#include "lipschitz/lipspace.hpp"
#include "lipschitz/freespace.hpp"
#include "lipschitz/properties.hpp"
#include "lipschitz/geometry.hpp"
#include "lipschitz/io.hpp"
