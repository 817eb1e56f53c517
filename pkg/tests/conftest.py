import os

import hypothesis
import numpy as np
import pytest

from builders import I5_DOCUMENT

np.seterr(all='warn')

hypothesis.settings.register_profile('default', max_examples=200, deadline=None)
hypothesis.settings.register_profile('fast', max_examples=20, deadline=None)
hypothesis.settings.load_profile(os.getenv('HYPOTHESIS_PROFILE', 'default'))


@pytest.fixture
def i5_document():
    return I5_DOCUMENT


@pytest.fixture
def i5_files(tmp_path):

    '''
    Reference i5-11400H platform and a single ResNet-sized job written to disk.

    '''
    platform_path = tmp_path / 'platform.xml'
    platform_path.write_text(I5_DOCUMENT, encoding='utf-8')
    workload_path = tmp_path / 'workload.json'
    workload_path.write_text('[{"id": "resnet18", "subtime": 0, "cores": 6, "flops": 182e9}]',
                             encoding='utf-8')

    return platform_path, workload_path
