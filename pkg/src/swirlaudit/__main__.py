from swirlaudit.cli import entry_point

entry_point()
