#pragma once

#include "msdehaze/airlight.hpp"
#include "msdehaze/codec.hpp"
#include "msdehaze/config.hpp"
#include "msdehaze/image.hpp"
#include "msdehaze/metrics.hpp"
#include "msdehaze/pipeline.hpp"
#include "msdehaze/pyramid.hpp"
#include "msdehaze/restore.hpp"
#include "msdehaze/synth.hpp"
#include "msdehaze/transmission.hpp"
#include "msdehaze/window_ops.hpp"
