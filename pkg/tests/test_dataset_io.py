import numpy as np
import pytest

from cleaning.cleaner import DatasetCleaner
from cleaning.ingest_report import IngestReport
from cli.dataset_io import describe, read_dataset, write_dataset
from core.dataset import Dataset
from core.errors import DatasetIOError, DatasetParseError, InvalidObservation
from core.params import Observation


class TestDataset:

    def test_suffstats(self, tiny_data):
        sx, sy, sxy, slog, sxlog = tiny_data.suffstats
        assert (sx, sy, sxy) == (3.0, 4.5, 6.5)
        assert slog == pytest.approx(np.log([0.5, 1.5, 2.5]).sum())
        assert sxlog == pytest.approx(np.log(1.5) + 2 * np.log(2.5))
        assert tiny_data.sum_log_factorial == pytest.approx(np.log(2.0))

    def test_suffstats_independent_of_order(self, small_data):
        order = np.random.default_rng(0).permutation(small_data.n)
        shuffled = Dataset.from_arrays(small_data.x[order], small_data.y[order])
        assert shuffled.suffstats == small_data.suffstats

    def test_immutable(self, tiny_data):
        with pytest.raises(ValueError):
            tiny_data.x[0] = 5

    def test_from_observations(self, tiny_data):
        again = Dataset.from_observations([Observation(int(a), float(b)) for a, b in zip(tiny_data.x, tiny_data.y)])
        np.testing.assert_array_equal(again.x, tiny_data.x)
        assert again.suffstats == tiny_data.suffstats
        assert len(tiny_data) == 3
        assert tiny_data.points.shape == (3, 2)

    @pytest.mark.parametrize('x, y', [([], []), ([1, 2], [1.0]), ([1.5], [1.0]), ([1], [0.0])])
    def test_rejects(self, x, y):
        with pytest.raises(InvalidObservation):
            Dataset.from_arrays(np.array(x), np.array(y, dtype=float))


class TestCleaner:

    def test_count_coercion_is_recorded(self):
        report = IngestReport()
        cleaner = DatasetCleaner(report)
        assert cleaner.clean_count('3.0') == (3, None)
        assert cleaner.clean_count('4') == (4, None)
        assert report.get_summary()['values_coerced'] == 1

    @pytest.mark.parametrize('raw', ['-1', '2.5', 'abc', '', None, 'NaN'])
    def test_bad_counts(self, raw):
        value, reason = DatasetCleaner().clean_count(raw)
        assert value is None and reason

    @pytest.mark.parametrize('raw', ['0', '-3.2', 'inf', 'x'])
    def test_bad_positive_values(self, raw):
        value, reason = DatasetCleaner().clean_positive(raw)
        assert value is None and reason

    def test_report_markdown(self):
        report = IngestReport()
        cleaner = DatasetCleaner(report)
        assert cleaner.clean_row(2, '1', '2.0') == Observation(1, 2.0)
        cleaner.clean_row(3, '1', '-2.0')
        cleaner.clean_row(4, '', '')
        text = report.generate_markdown()
        assert '## Rejected Rows' in text
        assert '| 3 |' in text
        assert '## Blank Lines Skipped' in text
        assert report.first_rejection['line'] == 3
        assert report.get_summary() == {
            'rows_read': 2, 'rows_accepted': 1, 'rows_rejected': 1,
            'values_coerced': 0, 'blank_lines_skipped': 1,
        }


class TestReadDataset:

    def test_reads_valid_file(self, write_csv):
        data = read_dataset(write_csv('x,y\n0,1.5\n3,0.25\n'))
        np.testing.assert_array_equal(data.x, [0, 3])
        np.testing.assert_array_equal(data.y, [1.5, 0.25])

    def test_crlf_and_bom(self, write_csv):
        data = read_dataset(write_csv('\ufeffx,y\r\n2,1\r\n5,3.5\r\n'))
        np.testing.assert_array_equal(data.x, [2, 5])

    def test_header_must_match(self, write_csv):
        with pytest.raises(DatasetParseError) as exc:
            read_dataset(write_csv('count,cost\n1,2\n'))
        assert exc.value.line == 1

    def test_negative_y_names_the_line(self, write_csv):
        report = IngestReport()
        with pytest.raises(DatasetParseError) as exc:
            read_dataset(write_csv('x,y\n1,2.0\n2,-1.0\n3,4.0\n'), report)
        assert exc.value.line == 3
        assert str(exc.value).startswith('line 3:')
        assert exc.value.exit_code == 2
        assert len(report.rejections) == 1

    def test_blank_lines_are_skipped(self, write_csv):
        report = IngestReport()
        data = read_dataset(write_csv('x,y\n1,2.0\n\n3,4.0\n'), report)
        assert data.n == 2
        assert report.blank_lines

    def test_header_only(self, write_csv):
        with pytest.raises(DatasetParseError):
            read_dataset(write_csv('x,y\n'))

    def test_extra_field(self, write_csv):
        with pytest.raises(DatasetParseError):
            read_dataset(write_csv('x,y\n1,2.0\n1,2.0,3.0\n'))

    def test_missing_file(self, tmp_path):
        with pytest.raises(DatasetIOError) as exc:
            read_dataset(str(tmp_path / 'absent.csv'))
        assert exc.value.exit_code == 3

    def test_write_then_read_is_exact(self, tmp_path, small_data):
        path = str(tmp_path / 'out.csv')
        write_dataset(small_data.x, small_data.y, path)
        again = read_dataset(path)
        np.testing.assert_array_equal(again.x, small_data.x)
        np.testing.assert_array_equal(again.y, small_data.y)
        assert open(path, 'rb').read().startswith(b'x,y\n')

    def test_describe(self, tiny_data):
        stats = describe(tiny_data)
        assert stats['x'] == {'min': 0.0, 'q25': 0.5, 'median': 1.0, 'mean': 1.0, 'q75': 1.5, 'max': 2.0}
        assert stats['y']['mean'] == pytest.approx(1.5)
