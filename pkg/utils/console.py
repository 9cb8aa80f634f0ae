"""
Вывод прогресса в консоль

Те же короткие строки с эмодзи, что и раньше в пайплайне,
но с переключателем verbose, чтобы тесты не шумели.
"""

import logging
from typing import Optional

RULE_WIDTH = 60


def configure_logging(level: str = "INFO") -> None:
    """Настроить стандартный logging по уровню из настроек"""
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )


class Console:
    """
    Печать статусных строк.

    Args:
        verbose: Печатать ли что-либо вообще
    """

    def __init__(self, verbose: bool = True):
        self.verbose = verbose

    def say(self, message: str = "") -> None:
        if self.verbose:
            print(message)

    def section(self, title: str, rule: Optional[str] = "-") -> None:
        """Заголовок шага с разделителем"""
        if not self.verbose:
            return
        print(f"\n{title}")
        if rule:
            print(rule * RULE_WIDTH)

    def rule(self, char: str = "=") -> None:
        if self.verbose:
            print(char * RULE_WIDTH)
