"""
Copyright 2026, The quadfeatures authors.
Licensed under the terms of the BSD license. See LICENSE file in project root for terms.
"""

import sys

from .cli import main

sys.exit(main())
