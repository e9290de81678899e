#pragma once

#include "flowtaint/model.hpp"
#include "flowtaint/ingest.hpp"
#include "flowtaint/validation.hpp"
#include "flowtaint/traversal.hpp"
#include "flowtaint/taint.hpp"
#include "flowtaint/report.hpp"
