#pragma once

#include "error.hpp"
#include "frame.hpp"
#include "model.hpp"
#include "expression.hpp"
#include "mass.hpp"
#include "rules.hpp"
#include "fusion.hpp"
