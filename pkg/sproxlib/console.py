# -*- coding: utf-8 -*-

"""
Timestamped, optionally coloured console output for the command line.

Licensed under the MIT License, see LICENSE.
"""

import sys
from datetime import datetime

try:
    # colorama is optional, output is plain without it
    from colorama import init, Style, Fore

    init()


    class Color:
        """
        Predefined colorama colors.
        """
        RED = Fore.RED
        GREEN = Fore.GREEN
        YELLOW = Fore.YELLOW
        CYAN = Fore.CYAN
        WHITE = Fore.WHITE

        B_RED = Style.BRIGHT + RED
        B_GREEN = Style.BRIGHT + GREEN
        B_YELLOW = Style.BRIGHT + YELLOW
        B_CYAN = Style.BRIGHT + CYAN

        RESET = Style.RESET_ALL

except ImportError:

    init = None
    Style = None
    Fore = None


    class Color:
        """
        Dummy colors in case importing colorama failed.
        """
        RED = ''
        GREEN = ''
        YELLOW = ''
        CYAN = ''
        WHITE = ''

        B_RED = ''
        B_GREEN = ''
        B_YELLOW = ''
        B_CYAN = ''

        RESET = ''


class Console:
    """
    Writes progress lines and tables to a stream.
    """
    def __init__(self, stream=None, clock_color=Color.CYAN, use24hour=True, colors=None):
        """
        Initialize the console.

        :param stream: The stream to write to, defaults to sys.stdout.
        :type stream: io.TextIOBase | None
        :param clock_color: Color of the timestamp.
        :type clock_color: str
        :param use24hour: Use the 24 hour time format.
        :type use24hour: bool
        :param colors: Use colors, defaults to True when the stream is a terminal.
        :type colors: bool | None
        """
        self._stream = stream or sys.stdout
        if colors is None:
            colors = hasattr(self._stream, 'isatty') and self._stream.isatty()

        self._colors = bool(colors)
        self._clock_color = clock_color if self._colors else ''
        self._use24hour = use24hour

    @property
    def colors(self):
        return self._colors

    def write(self, text, color='', *, ts=True):
        """
        Writes text to the stream.

        :param text: The text to write.
        :type text: str
        :param color: Optional Color
        :type color: str
        :param ts: Show a timestamp before the text.
        :type ts: bool
        """
        time_stamp = ''
        if ts:
            time_stamp = f'[{_ts(as24hour=self._use24hour)}] '

        if self._colors:
            txt = f'{self._clock_color}{time_stamp}{Color.RESET}{color}{text}{Color.RESET}'
        else:
            txt = f'{time_stamp}{text}'

        print(txt, file=self._stream)

    def table(self, header, rows, colors=None):
        """
        Write an aligned table without timestamps.

        :param header: The column titles.
        :type header: list
        :param rows: The rows, each as long as the header.
        :type rows: list
        :param colors: Optional Color per row.
        :type colors: list | None
        """
        cells = [[str(c) for c in header]] + [[str(c) for c in row] for row in rows]
        widths = [max(len(row[i]) for row in cells) for i in range(len(header))]

        def line(row):
            return '  '.join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip()

        self.write(line(cells[0]), ts=False)
        self.write(line(['-' * w for w in widths]), ts=False)
        for i, row in enumerate(cells[1:]):
            color = colors[i] if colors else ''
            self.write(line(row), color, ts=False)


def _ts(as24hour=False):
    """
    Timestamp in the format HH:MM:SS

    NOTE: milliseconds is included for the 24 hour format.

    :param as24hour: Use 24 hour time format.
    :type as24hour: bool
    :return: A string representing the time.
    :rtype: str
    """
    now = datetime.now()

    fmt = '%I:%M:%S %p'
    if as24hour:
        fmt = '%H:%M:%S.%f'

    ts = now.strftime(fmt)
    if as24hour:
        return ts[:-3]

    return ts
