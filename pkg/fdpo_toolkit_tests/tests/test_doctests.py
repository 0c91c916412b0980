from bx_py_utils.test_utils.unittest_utils import BaseDocTests

import fdpo_toolkit
import fdpo_toolkit_tests


class DocTests(BaseDocTests):
    def test_doctests(self):
        self.run_doctests(
            modules=(fdpo_toolkit, fdpo_toolkit_tests),
        )
