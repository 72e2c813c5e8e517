import pandas as pd

from scripts import generate_all_curves


def test_write_curve(tmp_path):
    path = tmp_path / 'tail.csv'
    generate_all_curves.write_curve(str(path), ['tail', '--n', '10', '--k', '2', '--points', '4'])
    frame = pd.read_csv(path)
    assert list(frame.columns)[:2] == ['param', 'value']
    assert len(frame) == 4
    assert frame['value'].iloc[0] == 1.0


def test_generate_summary(tmp_path):
    summary = pd.DataFrame({'check': ['mgf', 'tail_upper'], 'cells': [10, 20],
                            'violations': [0, 0], 'worst_margin': [-0.5, -1e-3]})
    generate_all_curves.generate_summary(summary, str(tmp_path))
    text = (tmp_path / 'summary.txt').read_text()
    assert 'Total cells: 30' in text
    assert 'Total violations: 0' in text
