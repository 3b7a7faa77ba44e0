#pragma once

#define FEARSIM_VERSION "0.1.0"
