import sys

from certifier.application import Application


app = Application()

sys.exit(app.exec())
