import sys

from qcong.main import main

sys.exit(main())
