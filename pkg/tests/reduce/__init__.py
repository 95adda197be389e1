#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.
