#pragma once

#include "conelag/catalog.hpp"
#include "conelag/cone.hpp"
#include "conelag/dilation.hpp"
#include "conelag/equilibrium.hpp"
#include "conelag/multiplier.hpp"
#include "conelag/order.hpp"
#include "conelag/penalty.hpp"
#include "conelag/process.hpp"
#include "conelag/setvalued.hpp"
#include "conelag/space.hpp"
