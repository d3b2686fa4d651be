#!/usr/bin/env python3

#
# Copyright (C) 2026 The panoctools developers
#
# This file is part of panoctools, an augmented Lagrangian solver for
# nonconvex constrained optimization built around PANOC.
#
# panoctools is free software: you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by the
# Free Software Foundation, either version 3 of the License, or (at
# your option) any later version.
#
# panoctools is distributed in the hope that it will be useful, but
# WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the GNU
# General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with panoctools.  If not, see <http://www.gnu.org/licenses/>.
#

if __name__ == "__main__":
    if __package__ is None:
        import sys
        sys.stderr.write("This script cannot be run directly; run 'panoctools' or "
                         "'python3 -m panoctools' instead\n")
        sys.exit(1)

    from . import panoctools
    panoctools.main()
