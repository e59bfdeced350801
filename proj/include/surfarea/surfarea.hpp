/// @file surfarea.hpp
/// @brief umbrella header for the surface-area toolkit

#pragma once

#include "cantor.hpp"
#include "error.hpp"
#include "fields.hpp"
#include "geocze.hpp"
#include "geometry.hpp"
#include "lantern.hpp"
#include "mollify.hpp"
#include "quadrature.hpp"
#include "quasilinear.hpp"
#include "steiner.hpp"
#include "tonelli.hpp"
