#pragma once

#include "jre/errors.hpp"
#include "jre/linalg.hpp"
#include "jre/random.hpp"
#include "jre/sphere_optimizer.hpp"
#include "jre/quantities.hpp"
#include "jre/ensembles.hpp"
#include "jre/audit.hpp"
#include "jre/io.hpp"
