import sys

from kapitza.main import main

sys.exit(main())
