"""
Writeable streams (objects with `write(text)` and `flush()`) that can be assigned to
`sys.stdout`. The experiment harness uses them to mirror its console output into a log file.
"""

import os

__all__ = ["WriteableStream", "Tee", "FileStream"]


####################################################################################################

class WriteableStream:
    """
    Interface for writeable streams. Subclasses only need to override `write(text)`.
    """

    def write(self, text):
        raise NotImplementedError()

    def flush(self):
        pass

    def close(self):
        pass

    @property
    def closed(self) -> bool:
        return False


####################################################################################################

class Tee(WriteableStream):
    """
    Forwards all writes to each of the given streams (which can be real file objects).

    With `close_on_exit=True`, closing the tee also closes the underlying streams, on a
    best-effort basis. Otherwise they are left open (e.g. `sys.stdout` must stay open).
    """

    def __init__(self, *files, close_on_exit=False):
        self.files = files
        self.close_on_exit = close_on_exit
        self._closed = False

    def write(self, text):
        if self._closed:
            raise ValueError("I/O operation on closed stream.")
        for file in self.files:
            file.write(text)

    def flush(self):
        if self._closed:
            raise ValueError("I/O operation on closed stream.")
        for file in self.files:
            file.flush()

    def close(self):
        if self.close_on_exit:
            for file in self.files:
                try:
                    file.close()
                except Exception:
                    pass
        self._closed = True

    @property
    def closed(self):
        return self._closed


####################################################################################################

class FileStream(WriteableStream):
    """
    Appends every write to the file at `path`, reopening it each time. The parent directory is
    created on construction. Reopening means nothing is lost if the file is moved away while an
    experiment is running.
    """

    def __init__(self, path: str, truncate: bool = False):
        self.path = path
        self._closed = False
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        if truncate:
            open(path, "w").close()

    def write(self, text):
        if self._closed:
            raise ValueError("I/O operation on closed stream.")
        with open(self.path, "a") as f:
            f.write(text)

    def close(self):
        self._closed = True

    @property
    def closed(self):
        return self._closed

####################################################################################################
