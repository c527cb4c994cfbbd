import sys

# ANSIカラー
_GREEN = "\033[32m"
_YELLOW = "\033[33m"
_RED = "\033[31m"
_CYAN = "\033[36m"
_RESET = "\033[0m"


def _tag(label: str, color: str) -> str:
    return f"{color}[{label}]{_RESET}"


def info(message: str) -> None:
    print(f"{_tag('INFO', _CYAN)} {message}")


def warn(message: str) -> None:
    print(f"{_tag('WARN', _YELLOW)} {message}")


def error(message: str) -> None:
    print(f"{_tag('ERROR', _RED)} {message}", file=sys.stderr)


def saved(message: str) -> None:
    print(f"{_tag('SAVE', _GREEN)} {message}")


def verdict(name: str, passed: bool, detail: str = "") -> None:
    """パネルの判定結果を1行表示"""
    tag = _tag("PASS", _GREEN) if passed else _tag("FAIL", _RED)
    print(f"{tag} {name}" + (f" ({detail})" if detail else ""))
