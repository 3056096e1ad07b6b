#pragma once

#include "tlselect/augment.hpp"
#include "tlselect/csv_io.hpp"
#include "tlselect/dataset_plan.hpp"
#include "tlselect/error.hpp"
#include "tlselect/fixtures.hpp"
#include "tlselect/image.hpp"
#include "tlselect/json_io.hpp"
#include "tlselect/metrics.hpp"
#include "tlselect/pnm.hpp"
#include "tlselect/protocol.hpp"
#include "tlselect/ranking.hpp"
#include "tlselect/report.hpp"
