#pragma once

#include <functional>
#include <string>

namespace mollified::diagnostics {

using WarningSink = std::function<void(const std::string&)>;

/// Routes a non-fatal warning to the installed sink (stderr by default).
void warn(const std::string& message);

/// Replaces the sink and returns the previous one. Pass an empty function to
/// restore the stderr default.
WarningSink set_warning_sink(WarningSink sink);

}  // namespace mollified::diagnostics
