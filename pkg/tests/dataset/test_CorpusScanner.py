import os
import tempfile
import unittest

from PIL import Image

from app.Errors import DataError
from app.dataset.CorpusScanner import CorpusScanner, scan_corpus
from tests.fixtures import make_corpus


class TestCorpusScanner(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.root = self.tmp.name

    def tearDown(self):
        self.tmp.cleanup()

    def test_scan(self):
        make_corpus(self.root, classes=3, per_class=4, size=24)
        manifest = scan_corpus(self.root)
        self.assertEqual(manifest.classes, ("cow00", "cow01", "cow02"))
        self.assertEqual(len(manifest.records), 12)
        record = manifest.records[0]
        self.assertEqual((record.width, record.height), (24, 24))
        self.assertEqual(record.byte_size, os.path.getsize(record.path))

    def test_undecodable_file_is_skipped(self):
        make_corpus(self.root, classes=2, per_class=3)
        broken = os.path.join(self.root, "cow01", "broken.jpg")
        with open(broken, 'wb') as fp:
            fp.write(b"not an image")
        scanner = CorpusScanner(self.root)
        with self.assertLogs("app.dataset.CorpusScanner", level="WARNING"):
            manifest = scanner.scan()
        self.assertEqual(scanner.skipped, [broken])
        self.assertEqual(len(manifest.records), 6)

    def test_other_files_are_ignored(self):
        make_corpus(self.root, classes=2, per_class=2)
        with open(os.path.join(self.root, "cow00", "notes.txt"), 'w') as fp:
            fp.write("tag 42")
        self.assertEqual(len(scan_corpus(self.root).records), 4)

    def test_missing_root(self):
        with self.assertRaises(DataError):
            scan_corpus(os.path.join(self.root, "missing"))

    def test_empty_root(self):
        with self.assertRaises(DataError) as ctx:
            scan_corpus(self.root)
        self.assertIn("no class directories", str(ctx.exception))

    def test_class_with_one_image(self):
        make_corpus(self.root, classes=2, per_class=3)
        os.makedirs(os.path.join(self.root, "lonely"))
        Image.new("RGB", (16, 16), "gray").save(os.path.join(self.root, "lonely", "img00.png"))
        with self.assertRaises(DataError) as ctx:
            scan_corpus(self.root)
        self.assertIn("lonely", str(ctx.exception))


if __name__ == '__main__':
    unittest.main()
