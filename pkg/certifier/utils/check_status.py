import enum


class CheckStatus(enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    SKIPPED = "skipped"

    def get_status_label(self):
        match self.name:
            case "PASS":
                return "PASS"
            case "FAIL":
                return "FAIL"
            case "SKIPPED":
                return "SKIP"

    def blocks_dependents(self) -> bool:
        # a node runs only when every prerequisite passed
        match self.name:
            case "PASS":
                return False
            case "FAIL" | "SKIPPED":
                return True
