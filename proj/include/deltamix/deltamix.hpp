#pragma once

#include "deltamix/config.hpp"
#include "deltamix/error.hpp"
#include "deltamix/lindblad.hpp"
#include "deltamix/presets.hpp"
#include "deltamix/propagation.hpp"
#include "deltamix/sweep.hpp"
#include "deltamix/types.hpp"
#include "deltamix/validate.hpp"
#include "deltamix/wave_mixing.hpp"
