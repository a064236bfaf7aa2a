#pragma once

#include "anisowave/common.hpp"
#include "anisowave/coorbit.hpp"
#include "anisowave/ellipsoid.hpp"
#include "anisowave/expansive.hpp"
#include "anisowave/fftgrid.hpp"
#include "anisowave/gaf_io.hpp"
#include "anisowave/group.hpp"
#include "anisowave/maximal.hpp"
#include "anisowave/norms.hpp"
#include "anisowave/polycover.hpp"
#include "anisowave/profile.hpp"
#include "anisowave/signal.hpp"
#include "anisowave/transform.hpp"
#include "anisowave/window.hpp"
