#ifndef PITCHTRACK_HPP
#define PITCHTRACK_HPP

#include "pitchtrack/cli/commands.hpp"
#include "pitchtrack/cli/config.hpp"
#include "pitchtrack/core/classes.hpp"
#include "pitchtrack/core/detection.hpp"
#include "pitchtrack/core/error.hpp"
#include "pitchtrack/core/geometry.hpp"
#include "pitchtrack/core/random.hpp"
#include "pitchtrack/eval/average_precision.hpp"
#include "pitchtrack/eval/identity.hpp"
#include "pitchtrack/eval/matching.hpp"
#include "pitchtrack/eval/metrics.hpp"
#include "pitchtrack/eval/report.hpp"
#include "pitchtrack/ingest/adapter.hpp"
#include "pitchtrack/ingest/detection_io.hpp"
#include "pitchtrack/ingest/embedding_io.hpp"
#include "pitchtrack/ingest/frame_plan.hpp"
#include "pitchtrack/ingest/ground_truth_io.hpp"
#include "pitchtrack/ingest/letterbox.hpp"
#include "pitchtrack/render/raster.hpp"
#include "pitchtrack/render/render.hpp"
#include "pitchtrack/sim/config.hpp"
#include "pitchtrack/sim/simulator.hpp"
#include "pitchtrack/team/fuzzy.hpp"
#include "pitchtrack/team/kmeans.hpp"
#include "pitchtrack/team/knn.hpp"
#include "pitchtrack/team/layout.hpp"
#include "pitchtrack/team/teams.hpp"
#include "pitchtrack/tracker/assignment.hpp"
#include "pitchtrack/tracker/byte_tracker.hpp"
#include "pitchtrack/tracker/kalman.hpp"
#include "pitchtrack/tracker/track_io.hpp"

#endif
