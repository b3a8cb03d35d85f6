#pragma once

#include "lexent/error.hpp"            // IWYU pragma: export
#include "lexent/alphabet.hpp"         // IWYU pragma: export
#include "lexent/frequency_table.hpp"  // IWYU pragma: export
#include "lexent/counting.hpp"         // IWYU pragma: export
#include "lexent/entropy.hpp"          // IWYU pragma: export
#include "lexent/report.hpp"           // IWYU pragma: export
#include "lexent/zipf.hpp"             // IWYU pragma: export
#include "lexent/textgen.hpp"          // IWYU pragma: export
#include "lexent/tables.hpp"           // IWYU pragma: export
