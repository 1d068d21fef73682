import errno
import os


def is_pathname_valid(pathname: str) -> bool:
    """`True` if every component of pathname is acceptable to the current OS."""
    if not isinstance(pathname, str) or not pathname:
        return False

    try:
        _, pathname = os.path.splitdrive(pathname)
        root = os.path.sep
        for part in pathname.split(os.path.sep):
            try:
                os.lstat(root + part)
            except OSError as exc:
                if exc.errno in {errno.ENAMETOOLONG, errno.ERANGE}:
                    return False
    # embedded NUL character
    except (TypeError, ValueError):
        return False

    return True


def _nearest_existing_ancestor(pathname: str) -> str:
    directory = os.path.dirname(os.path.abspath(pathname))
    while not os.path.exists(directory):
        parent = os.path.dirname(directory)
        if parent == directory:
            break
        directory = parent
    return directory


def is_path_creatable(pathname: str) -> bool:
    """`True` if the missing folders and the file itself could be created by the current user."""
    ancestor = _nearest_existing_ancestor(pathname)
    return os.path.isdir(ancestor) and os.access(ancestor, os.W_OK)


def is_path_exists_or_creatable(pathname: str) -> bool:
    """`True` for a valid pathname naming a writable file or a creatable one. Never raises."""
    try:
        if not is_pathname_valid(pathname):
            return False
        if os.path.isdir(pathname):
            return False
        if os.path.exists(pathname):
            return os.access(pathname, os.W_OK)
        return is_path_creatable(pathname)
    except OSError:
        return False
