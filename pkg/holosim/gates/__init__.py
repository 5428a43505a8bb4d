# Gates Package
