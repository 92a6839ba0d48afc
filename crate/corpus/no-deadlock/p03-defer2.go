// pattern: P3 defer2
// expected: no-deadlock
package main

import "fmt"

func main() {
	ch := make(chan int)
	defer func() {
		defer func() {
			fmt.Println(<-ch)
		}()
		fmt.Println(<-ch)
	}()
	go func() {
		ch <- 1
		ch <- 2
	}()
}
