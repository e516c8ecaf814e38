#pragma once

#include "qrec/channel.hpp"
#include "qrec/errors.hpp"
#include "qrec/io.hpp"
#include "qrec/linalg.hpp"
#include "qrec/metrics.hpp"
#include "qrec/recovery.hpp"
#include "qrec/rng.hpp"
#include "qrec/robust.hpp"
#include "qrec/states.hpp"
